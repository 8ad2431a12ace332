#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dgner/model.hpp"
#include "dgner/train.hpp"

namespace dgner {

// One key = value per line, '#' comments, blank lines ignored.
using KeyValues = std::map<std::string, std::string>;

KeyValues read_config_file(const std::string& path);

// "key=value" strings from the command line, merged over the file (flags win).
void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides);

struct RunConfig {
  ModelConfig model;
  TrainConfig trainer;
  std::uint64_t seed = 42;  // drives model init and the trainer alike
  std::string train_corpus, dev_corpus, test_corpus;
  std::string embeddings;
  std::string context_train, context_dev, context_test;
  std::string checkpoint;
  std::string output_dir;
};

// Validates every key (unknown keys are a config error naming the key),
// parses values, and applies the architecture-dependent defaults: the
// graph-convolution model trains 300 epochs with clip 3 unless overridden.
RunConfig resolve_config(const KeyValues& kv);

// Canonical sorted key = value form of the effective configuration; feeding
// it back through resolve_config reproduces the same RunConfig.
void echo_config(const RunConfig& rc, std::ostream& out);

}  // namespace dgner
