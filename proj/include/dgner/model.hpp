#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dgner/corpus.hpp"
#include "dgner/crf.hpp"
#include "dgner/embeddings.hpp"
#include "dgner/graph.hpp"
#include "dgner/lstm.hpp"
#include "dgner/param_store.hpp"
#include "dgner/vocab.hpp"

namespace dgner {

enum class Arch { bilstm, dglstm, bilstm_gcn };
enum class Interaction { self, concat, add, mlp };

Arch arch_from_string(const std::string& s);
Interaction interaction_from_string(const std::string& s);
std::string to_string(Arch a);
std::string to_string(Interaction i);

struct ModelConfig {
  Arch arch = Arch::dglstm;
  int layers = 2;  // L; 0 projects the token inputs straight to emissions
  Interaction interaction = Interaction::mlp;
  int hidden = 200;  // per LSTM direction, and GCN output width
  int word_dim = 100;
  int char_emb_dim = 25;
  int char_hidden = 50;
  int rel_dim = 25;
  double dropout = 0.5;  // applied to token inputs during training
  int gcn_layers = 1;    // J
  bool gcn_relational = true;
  bool use_context_vectors = false;
  int context_dim = 0;
  bool mask_transitions = false;
  bool freeze_word_embeddings = false;

  void validate() const;  // throws ConfigError on inconsistent settings

  // word embedding + char BiLSTM halves
  int word_rep_dim() const { return word_dim + 2 * char_hidden; }
  // width of the per-token encoder input (u for the parent-augmented model)
  int input_dim() const;
  // width of an interaction output, which feeds the next LSTM layer
  int interaction_dim() const;
  // width fed into the emission projection
  int encoder_out_dim() const;
};

// A trained or trainable model: everything a checkpoint holds.
struct Model {
  ModelConfig config;
  Vocabulary vocab;
  ParamStore store;
  CrfMask mask;  // populated when config.mask_transitions

  Model(ModelConfig c, Vocabulary v, std::uint64_t seed);
  int num_labels() const { return vocab.num_labels(); }
  const CrfMask* mask_ptr() const {
    return config.mask_transitions ? &mask : nullptr;
  }
};

// Registers every parameter in a fixed order (so init draws reproduce) and
// copies pretrained word vectors over the matching rows.
Model build_model(const ModelConfig& config, const Vocabulary& vocab,
                  std::uint64_t seed, const EmbeddingTable* pretrained = nullptr);

// Final fwd/bwd hidden of a char-level BiLSTM over the word's codepoints.
Var char_rep(Graph& g, Model& m, const std::string& form);

// Per-token input vectors. The parent-augmented architecture concatenates
// [own rep; parent rep; relation embedding]; a root token is its own parent
// and takes the dedicated root-relation embedding. Other architectures use
// the plain rep. Context vectors, when configured, are appended; dropout
// applies only when train is set.
std::vector<Var> build_input(Graph& g, Model& m, const Sentence& s,
                             bool train = false, Rng* dropout_rng = nullptr,
                             const std::vector<std::vector<double>>* context = nullptr);

Var interact(Graph& g, Var h_i, Var h_parent, Interaction kind,
             Tensor* w1 = nullptr, Tensor* w2 = nullptr);

// L >= 1 stack with parent interactions between consecutive layers (L-1
// applications; the root interacts with itself).
std::vector<Var> dglstm_forward(Graph& g, Model& m, const std::vector<Var>& u,
                                const std::vector<int>& parent);

// One graph-convolution layer over the symmetric tree adjacency with
// self-loops; layer_idx selects the parameter block.
std::vector<Var> gcn_layer(Graph& g, Model& m, const std::vector<Var>& h,
                           const Sentence& s, int layer_idx);

// Full encoder: token inputs -> configured stack -> emission projection.
// Returns one K-wide score node per position.
std::vector<Var> encode(Graph& g, Model& m, const Sentence& s,
                        bool train = false, Rng* dropout_rng = nullptr,
                        const std::vector<std::vector<double>>* context = nullptr);

}  // namespace dgner
