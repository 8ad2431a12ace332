#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dgner/corpus.hpp"
#include "dgner/embeddings.hpp"
#include "dgner/model.hpp"

namespace dgner {

struct TrainConfig {
  double lr = 0.01;
  int batch = 10;
  double l2 = 1e-8;
  int epochs = 100;
  double clip = 0.0;  // 0 = off
  std::uint64_t seed = 42;
  bool shuffle = true;

  void validate() const;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;  // summed over the epoch
  double dev_p = 0.0, dev_r = 0.0, dev_f1 = 0.0;
};

struct TrainResult {
  Model model;  // parameters from the best dev epoch
  int best_epoch = 0;
  double best_f1 = 0.0;
  std::vector<EpochLog> log;
};

// Seeded shuffling, fixed-size batches, loss summed over each batch, one
// update per batch, dev evaluation every epoch; the earliest epoch wins F1
// ties. Bit-deterministic for a given seed. progress, when given, receives
// one line per epoch.
TrainResult train(Model m, const TrainConfig& tc,
                  const std::vector<Sentence>& train_set,
                  const std::vector<Sentence>& dev_set,
                  const ContextVectors* train_ctx = nullptr,
                  const ContextVectors* dev_ctx = nullptr,
                  std::ostream* progress = nullptr);

void write_epoch_log(const std::vector<EpochLog>& log, std::ostream& out);

}  // namespace dgner
