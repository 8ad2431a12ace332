#include "dgner/runconfig.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "dgner/errors.hpp"

namespace dgner {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

const char* const kKnownKeys[] = {
    "arch",          "layers",          "interaction",
    "hidden",        "word_dim",        "char_emb_dim",
    "char_hidden",   "rel_dim",         "dropout",
    "gcn_layers",    "gcn_relational",  "use_context_vectors",
    "mask_transitions", "freeze_word_embeddings",
    "lr",            "batch",           "l2",
    "epochs",        "clip",            "shuffle",
    "seed",          "train_corpus",    "dev_corpus",
    "test_corpus",   "embeddings",      "context_train",
    "context_dev",   "context_test",    "checkpoint",
    "output_dir",
};

bool known_key(const std::string& k) {
  for (const char* key : kKnownKeys)
    if (k == key) return true;
  return false;
}

long long parse_ll(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size())
    throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size())
    throw ConfigError("key '" + key + "': '" + v +
                      "' is not an unsigned integer");
  return out;
}

double parse_f64(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size())
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("key '" + key + "': '" + v +
                    "' is not a boolean (true/false/1/0)");
}

}  // namespace

KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + " line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + " line " + std::to_string(line_no) +
                        ": empty key");
    kv[key] = value;  // later lines win within a file
  }
  return kv;
}

void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides) {
  for (const std::string& kvp : overrides) {
    const std::size_t eq = kvp.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override '" + kvp + "' is not key=value");
    kv[trim(kvp.substr(0, eq))] = trim(kvp.substr(eq + 1));
  }
}

RunConfig resolve_config(const KeyValues& kv) {
  for (const auto& [key, value] : kv)
    if (!known_key(key)) throw ConfigError("unknown config key '" + key + "'");
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  RunConfig rc;
  if (const auto* v = get("arch")) rc.model.arch = arch_from_string(*v);
  if (const auto* v = get("layers"))
    rc.model.layers = static_cast<int>(parse_ll("layers", *v));
  if (const auto* v = get("interaction"))
    rc.model.interaction = interaction_from_string(*v);
  if (const auto* v = get("hidden"))
    rc.model.hidden = static_cast<int>(parse_ll("hidden", *v));
  if (const auto* v = get("word_dim"))
    rc.model.word_dim = static_cast<int>(parse_ll("word_dim", *v));
  if (const auto* v = get("char_emb_dim"))
    rc.model.char_emb_dim = static_cast<int>(parse_ll("char_emb_dim", *v));
  if (const auto* v = get("char_hidden"))
    rc.model.char_hidden = static_cast<int>(parse_ll("char_hidden", *v));
  if (const auto* v = get("rel_dim"))
    rc.model.rel_dim = static_cast<int>(parse_ll("rel_dim", *v));
  if (const auto* v = get("dropout")) rc.model.dropout = parse_f64("dropout", *v);
  if (const auto* v = get("gcn_layers"))
    rc.model.gcn_layers = static_cast<int>(parse_ll("gcn_layers", *v));
  if (const auto* v = get("gcn_relational"))
    rc.model.gcn_relational = parse_bool("gcn_relational", *v);
  if (const auto* v = get("use_context_vectors"))
    rc.model.use_context_vectors = parse_bool("use_context_vectors", *v);
  if (const auto* v = get("mask_transitions"))
    rc.model.mask_transitions = parse_bool("mask_transitions", *v);
  if (const auto* v = get("freeze_word_embeddings"))
    rc.model.freeze_word_embeddings = parse_bool("freeze_word_embeddings", *v);

  if (const auto* v = get("lr")) rc.trainer.lr = parse_f64("lr", *v);
  if (const auto* v = get("batch"))
    rc.trainer.batch = static_cast<int>(parse_ll("batch", *v));
  if (const auto* v = get("l2")) rc.trainer.l2 = parse_f64("l2", *v);
  if (const auto* v = get("epochs"))
    rc.trainer.epochs = static_cast<int>(parse_ll("epochs", *v));
  else if (rc.model.arch == Arch::bilstm_gcn)
    rc.trainer.epochs = 300;
  if (const auto* v = get("clip")) rc.trainer.clip = parse_f64("clip", *v);
  else if (rc.model.arch == Arch::bilstm_gcn)
    rc.trainer.clip = 3.0;
  if (const auto* v = get("shuffle"))
    rc.trainer.shuffle = parse_bool("shuffle", *v);
  if (const auto* v = get("seed")) rc.seed = parse_u64("seed", *v);
  rc.trainer.seed = rc.seed;

  if (const auto* v = get("train_corpus")) rc.train_corpus = *v;
  if (const auto* v = get("dev_corpus")) rc.dev_corpus = *v;
  if (const auto* v = get("test_corpus")) rc.test_corpus = *v;
  if (const auto* v = get("embeddings")) rc.embeddings = *v;
  if (const auto* v = get("context_train")) rc.context_train = *v;
  if (const auto* v = get("context_dev")) rc.context_dev = *v;
  if (const auto* v = get("context_test")) rc.context_test = *v;
  if (const auto* v = get("checkpoint")) rc.checkpoint = *v;
  if (const auto* v = get("output_dir")) rc.output_dir = *v;
  return rc;
}

void echo_config(const RunConfig& rc, std::ostream& out) {
  std::ostringstream num;
  num.precision(std::numeric_limits<double>::max_digits10);
  auto fnum = [&](double v) {
    num.str("");
    num << v;
    return num.str();
  };
  std::map<std::string, std::string> kv;
  kv["arch"] = to_string(rc.model.arch);
  kv["layers"] = std::to_string(rc.model.layers);
  kv["interaction"] = to_string(rc.model.interaction);
  kv["hidden"] = std::to_string(rc.model.hidden);
  kv["word_dim"] = std::to_string(rc.model.word_dim);
  kv["char_emb_dim"] = std::to_string(rc.model.char_emb_dim);
  kv["char_hidden"] = std::to_string(rc.model.char_hidden);
  kv["rel_dim"] = std::to_string(rc.model.rel_dim);
  kv["dropout"] = fnum(rc.model.dropout);
  kv["gcn_layers"] = std::to_string(rc.model.gcn_layers);
  kv["gcn_relational"] = rc.model.gcn_relational ? "true" : "false";
  kv["use_context_vectors"] = rc.model.use_context_vectors ? "true" : "false";
  kv["mask_transitions"] = rc.model.mask_transitions ? "true" : "false";
  kv["freeze_word_embeddings"] =
      rc.model.freeze_word_embeddings ? "true" : "false";
  kv["lr"] = fnum(rc.trainer.lr);
  kv["batch"] = std::to_string(rc.trainer.batch);
  kv["l2"] = fnum(rc.trainer.l2);
  kv["epochs"] = std::to_string(rc.trainer.epochs);
  kv["clip"] = fnum(rc.trainer.clip);
  kv["shuffle"] = rc.trainer.shuffle ? "true" : "false";
  kv["seed"] = std::to_string(rc.seed);
  kv["train_corpus"] = rc.train_corpus;
  kv["dev_corpus"] = rc.dev_corpus;
  kv["test_corpus"] = rc.test_corpus;
  kv["embeddings"] = rc.embeddings;
  kv["context_train"] = rc.context_train;
  kv["context_dev"] = rc.context_dev;
  kv["context_test"] = rc.context_test;
  kv["checkpoint"] = rc.checkpoint;
  kv["output_dir"] = rc.output_dir;
  for (const auto& [key, value] : kv) out << key << " = " << value << '\n';
}

}  // namespace dgner
