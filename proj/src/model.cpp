#include "dgner/model.hpp"

#include <utility>

#include "dgner/errors.hpp"

namespace dgner {

Arch arch_from_string(const std::string& s) {
  if (s == "bilstm") return Arch::bilstm;
  if (s == "dglstm") return Arch::dglstm;
  if (s == "bilstm-gcn") return Arch::bilstm_gcn;
  throw ConfigError("unknown architecture '" + s +
                    "' (expected bilstm, dglstm or bilstm-gcn)");
}

Interaction interaction_from_string(const std::string& s) {
  if (s == "self") return Interaction::self;
  if (s == "concat") return Interaction::concat;
  if (s == "add") return Interaction::add;
  if (s == "mlp") return Interaction::mlp;
  throw ConfigError("unknown interaction '" + s +
                    "' (expected self, concat, add or mlp)");
}

std::string to_string(Arch a) {
  switch (a) {
    case Arch::bilstm: return "bilstm";
    case Arch::dglstm: return "dglstm";
    case Arch::bilstm_gcn: return "bilstm-gcn";
  }
  return "?";
}

std::string to_string(Interaction i) {
  switch (i) {
    case Interaction::self: return "self";
    case Interaction::concat: return "concat";
    case Interaction::add: return "add";
    case Interaction::mlp: return "mlp";
  }
  return "?";
}

void ModelConfig::validate() const {
  if (layers < 0) throw ConfigError("layers must be >= 0");
  if (hidden < 1 || word_dim < 1 || char_emb_dim < 1 || char_hidden < 1 ||
      rel_dim < 1)
    throw ConfigError("model dimensions must be positive");
  if (dropout < 0.0 || dropout >= 1.0)
    throw ConfigError("dropout must be in [0,1)");
  if (gcn_layers < 0) throw ConfigError("gcn_layers must be >= 0");
  if (use_context_vectors && context_dim < 1)
    throw ConfigError("context vectors enabled but context_dim not set");
}

int ModelConfig::input_dim() const {
  const int ctx = use_context_vectors ? context_dim : 0;
  if (arch == Arch::dglstm) return 2 * word_rep_dim() + rel_dim + ctx;
  return word_rep_dim() + ctx;
}

int ModelConfig::interaction_dim() const {
  switch (interaction) {
    case Interaction::self:
    case Interaction::add: return 2 * hidden;
    case Interaction::concat: return 4 * hidden;
    case Interaction::mlp: return hidden;
  }
  return 0;
}

int ModelConfig::encoder_out_dim() const {
  const int lstm_out = layers >= 1 ? 2 * hidden : input_dim();
  if (arch == Arch::bilstm_gcn && gcn_layers >= 1) return hidden;
  return lstm_out;
}

Model::Model(ModelConfig c, Vocabulary v, std::uint64_t seed)
    : config(std::move(c)), vocab(std::move(v)), store(seed) {
  if (config.mask_transitions) mask = iobes_mask(vocab);
}

Model build_model(const ModelConfig& config, const Vocabulary& vocab,
                  std::uint64_t seed, const EmbeddingTable* pretrained) {
  config.validate();
  if (pretrained && pretrained->dim != config.word_dim)
    throw ConfigError("embedding file dimension " +
                      std::to_string(pretrained->dim) +
                      " does not match word_dim " +
                      std::to_string(config.word_dim));
  Model m(config, vocab, seed);
  ParamStore& ps = m.store;

  Tensor& words =
      ps.add_embedding("embed/word", vocab.num_words(), config.word_dim);
  if (pretrained) {
    for (int id = 0; id < vocab.num_words(); ++id) {
      const std::vector<double>* vec = pretrained->find(vocab.word(id));
      if (!vec) continue;
      for (int j = 0; j < config.word_dim; ++j) words.at(id, j) = (*vec)[j];
    }
  }
  words.trainable = !config.freeze_word_embeddings;

  ps.add_embedding("embed/char", vocab.num_chars(), config.char_emb_dim);
  make_lstm_params(ps, "char_lstm/fwd", config.char_emb_dim, config.char_hidden);
  make_lstm_params(ps, "char_lstm/bwd", config.char_emb_dim, config.char_hidden);

  if (config.arch == Arch::dglstm)
    ps.add_embedding("embed/rel", vocab.num_relations(), config.rel_dim);

  for (int l = 1; l <= config.layers; ++l) {
    int in_dim;
    if (l == 1)
      in_dim = config.input_dim();
    else
      in_dim = config.arch == Arch::dglstm ? config.interaction_dim()
                                           : 2 * config.hidden;
    const std::string prefix = "lstm/l" + std::to_string(l);
    make_lstm_params(ps, prefix + "/fwd", in_dim, config.hidden);
    make_lstm_params(ps, prefix + "/bwd", in_dim, config.hidden);
  }

  if (config.arch == Arch::dglstm && config.layers >= 2 &&
      config.interaction == Interaction::mlp) {
    ps.add_matrix("inter/w1", config.hidden, 2 * config.hidden);
    ps.add_matrix("inter/w2", config.hidden, 2 * config.hidden);
  }

  if (config.arch == Arch::bilstm_gcn) {
    for (int j = 1; j <= config.gcn_layers; ++j) {
      const int in_dim =
          j == 1 ? (config.layers >= 1 ? 2 * config.hidden : config.input_dim())
                 : config.hidden;
      const std::string prefix = "gcn/l" + std::to_string(j);
      if (config.gcn_relational) {
        ps.add_matrix(prefix + "/w1", config.hidden, in_dim);
        ps.add_matrix(prefix + "/w2", config.hidden, in_dim);
      } else {
        ps.add_matrix(prefix + "/w", config.hidden, in_dim);
      }
      ps.add_vector(prefix + "/b", config.hidden);
    }
    if (config.gcn_relational && config.gcn_layers >= 1) {
      Tensor& wr = ps.add_vector("gcn/wr", vocab.num_relations());
      for (double& v : wr.values) v = 1.0;  // neutral edge weights at start
    }
  }

  const int k = vocab.num_labels();
  ps.add_matrix("emit/w", k, config.encoder_out_dim());
  ps.add_vector("emit/b", k);
  ps.add_matrix("crf/a", k + 2, k + 2);
  return m;
}

Var char_rep(Graph& g, Model& m, const std::string& form) {
  const std::vector<int> ids = m.vocab.char_ids(form);
  if (ids.empty())
    return g.input(std::vector<double>(2 * m.config.char_hidden, 0.0));
  Tensor& table = m.store.at("embed/char");
  std::vector<Var> seq;
  seq.reserve(ids.size());
  for (int id : ids) seq.push_back(g.lookup(table, id));
  const LstmParams fwd = make_lstm_params(m.store, "char_lstm/fwd",
                                          m.config.char_emb_dim,
                                          m.config.char_hidden);
  const LstmParams bwd = make_lstm_params(m.store, "char_lstm/bwd",
                                          m.config.char_emb_dim,
                                          m.config.char_hidden);
  std::vector<Var> f = lstm_run(g, seq, fwd, false);
  std::vector<Var> b = lstm_run(g, seq, bwd, true);
  return g.concat({f.back(), b.front()});
}

namespace {

std::vector<int> parent_indices(const Sentence& s) {
  std::vector<int> parent(s.n());
  for (int i = 0; i < s.n(); ++i)
    parent[i] = s.tokens[i].head == 0 ? i : s.tokens[i].head - 1;
  return parent;
}

}  // namespace

std::vector<Var> build_input(Graph& g, Model& m, const Sentence& s, bool train,
                             Rng* dropout_rng,
                             const std::vector<std::vector<double>>* context) {
  const ModelConfig& cfg = m.config;
  const int n = s.n();
  if (n == 0) throw DataError("cannot encode an empty sentence");
  if (cfg.use_context_vectors) {
    if (!context)
      throw ConfigError("context vectors configured but none supplied");
    if (static_cast<int>(context->size()) != n)
      throw DataError("context vector count does not match sentence length");
    for (const auto& v : *context)
      if (static_cast<int>(v.size()) != cfg.context_dim)
        throw DataError("context vector dimension mismatch");
  }
  const bool drop = train && cfg.dropout > 0.0;
  if (drop && !dropout_rng)
    throw ConfigError("training-mode encode needs a dropout RNG");

  Tensor& words = m.store.at("embed/word");
  std::vector<Var> rep(n);
  for (int i = 0; i < n; ++i) {
    Var w = g.lookup(words, m.vocab.word_id(s.tokens[i].form));
    rep[i] = g.concat({w, char_rep(g, m, s.tokens[i].form)});
  }

  std::vector<Var> u(n);
  if (cfg.arch == Arch::dglstm) {
    Tensor& rels = m.store.at("embed/rel");
    const std::vector<int> parent = parent_indices(s);
    for (int i = 0; i < n; ++i) {
      const int rel_id = s.tokens[i].head == 0
                             ? Vocabulary::kRootRel
                             : m.vocab.rel_id(s.tokens[i].relation);
      std::vector<Var> parts{rep[i], rep[parent[i]], g.lookup(rels, rel_id)};
      if (cfg.use_context_vectors) parts.push_back(g.input((*context)[i]));
      u[i] = g.concat(parts);
    }
  } else {
    for (int i = 0; i < n; ++i) {
      if (cfg.use_context_vectors)
        u[i] = g.concat({rep[i], g.input((*context)[i])});
      else
        u[i] = rep[i];
    }
  }
  if (drop)
    for (int i = 0; i < n; ++i) u[i] = g.dropout(u[i], cfg.dropout, *dropout_rng);
  return u;
}

Var interact(Graph& g, Var h_i, Var h_parent, Interaction kind, Tensor* w1,
             Tensor* w2) {
  switch (kind) {
    case Interaction::self:
      return h_i;
    case Interaction::concat:
      return g.concat({h_i, h_parent});
    case Interaction::add:
      if (g.size(h_i) != g.size(h_parent))
        throw ConfigError("interaction operands differ in size");
      return g.add(h_i, h_parent);
    case Interaction::mlp:
      if (!w1 || !w2) throw ConfigError("mlp interaction needs its matrices");
      return g.relu(g.add(g.matvec(*w1, h_i), g.matvec(*w2, h_parent)));
  }
  throw ConfigError("unknown interaction kind");
}

std::vector<Var> dglstm_forward(Graph& g, Model& m, const std::vector<Var>& u,
                                const std::vector<int>& parent) {
  const ModelConfig& cfg = m.config;
  if (cfg.layers < 1) throw ConfigError("layer stack needs layers >= 1");
  Tensor* w1 = nullptr;
  Tensor* w2 = nullptr;
  if (cfg.interaction == Interaction::mlp && cfg.layers >= 2) {
    w1 = &m.store.at("inter/w1");
    w2 = &m.store.at("inter/w2");
  }
  std::vector<Var> h;
  for (int l = 1; l <= cfg.layers; ++l) {
    const int in_dim = l == 1 ? cfg.input_dim() : cfg.interaction_dim();
    const std::string prefix = "lstm/l" + std::to_string(l);
    const LstmParams fwd =
        make_lstm_params(m.store, prefix + "/fwd", in_dim, cfg.hidden);
    const LstmParams bwd =
        make_lstm_params(m.store, prefix + "/bwd", in_dim, cfg.hidden);
    if (l == 1) {
      h = bilstm(g, u, fwd, bwd);
    } else {
      std::vector<Var> mixed(h.size());
      for (std::size_t i = 0; i < h.size(); ++i)
        mixed[i] = interact(g, h[i], h[parent[i]], cfg.interaction, w1, w2);
      h = bilstm(g, mixed, fwd, bwd);
    }
  }
  return h;
}

std::vector<Var> gcn_layer(Graph& g, Model& m, const std::vector<Var>& h,
                           const Sentence& s, int layer_idx) {
  const ModelConfig& cfg = m.config;
  const std::string prefix = "gcn/l" + std::to_string(layer_idx);
  Tensor& b = m.store.at(prefix + "/b");
  const int n = s.n();

  std::vector<std::vector<int>> children(n);
  for (int i = 0; i < n; ++i)
    if (s.tokens[i].head != 0) children[s.tokens[i].head - 1].push_back(i);
  // incoming relation id, reused for the token's self-loop
  auto rel_of = [&](int i) {
    return s.tokens[i].head == 0 ? Vocabulary::kRootRel
                                 : m.vocab.rel_id(s.tokens[i].relation);
  };

  std::vector<Var> out(n);
  if (cfg.gcn_relational) {
    Tensor& w1 = m.store.at(prefix + "/w1");
    Tensor& w2 = m.store.at(prefix + "/w2");
    Var wr = g.vec_param(m.store.at("gcn/wr"));
    auto edge = [&](int j, int rel) {
      return g.add(g.matvec(w1, h[j]),
                   g.scale_by(g.matvec(w2, h[j]), g.pick(wr, rel)));
    };
    for (int i = 0; i < n; ++i) {
      std::vector<Var> terms;
      terms.push_back(edge(i, rel_of(i)));  // self-loop
      if (s.tokens[i].head != 0)
        terms.push_back(edge(s.tokens[i].head - 1, rel_of(i)));
      for (int c : children[i]) terms.push_back(edge(c, rel_of(c)));
      out[i] = g.relu(g.add(g.sum(terms), g.vec_param(b)));
    }
  } else {
    Tensor& w = m.store.at(prefix + "/w");
    for (int i = 0; i < n; ++i) {
      std::vector<Var> terms;
      terms.push_back(g.matvec(w, h[i]));
      if (s.tokens[i].head != 0)
        terms.push_back(g.matvec(w, h[s.tokens[i].head - 1]));
      for (int c : children[i]) terms.push_back(g.matvec(w, h[c]));
      out[i] = g.relu(g.add(g.sum(terms), g.vec_param(b)));
    }
  }
  return out;
}

std::vector<Var> encode(Graph& g, Model& m, const Sentence& s, bool train,
                        Rng* dropout_rng,
                        const std::vector<std::vector<double>>* context) {
  const ModelConfig& cfg = m.config;
  std::vector<Var> h = build_input(g, m, s, train, dropout_rng, context);
  if (cfg.layers >= 1) {
    if (cfg.arch == Arch::dglstm) {
      h = dglstm_forward(g, m, h, parent_indices(s));
    } else {
      for (int l = 1; l <= cfg.layers; ++l) {
        const int in_dim = l == 1 ? cfg.input_dim() : 2 * cfg.hidden;
        const std::string prefix = "lstm/l" + std::to_string(l);
        const LstmParams fwd =
            make_lstm_params(m.store, prefix + "/fwd", in_dim, cfg.hidden);
        const LstmParams bwd =
            make_lstm_params(m.store, prefix + "/bwd", in_dim, cfg.hidden);
        h = bilstm(g, h, fwd, bwd);
      }
    }
  }
  if (cfg.arch == Arch::bilstm_gcn)
    for (int j = 1; j <= cfg.gcn_layers; ++j) h = gcn_layer(g, m, h, s, j);

  Tensor& ew = m.store.at("emit/w");
  Tensor& eb = m.store.at("emit/b");
  std::vector<Var> emissions(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    emissions[i] = g.linear(ew, h[i], eb);
  return emissions;
}

}  // namespace dgner
