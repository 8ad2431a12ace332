#pragma once

#include <cstdint>
#include <vector>

#include "dgner/graph.hpp"
#include "dgner/tensor.hpp"
#include "dgner/vocab.hpp"

namespace dgner {

// Transition scores live in a (K+2)x(K+2) tensor: label ids 0..K-1 plus a
// synthetic start row K and end column K+1. Disallowed transitions take this
// additive penalty, which drowns every real score without leaving the finite
// range.
constexpr double kMaskPenalty = -1e30;

inline int crf_start(int num_labels) { return num_labels; }
inline int crf_end(int num_labels) { return num_labels + 1; }

struct CrfMask {
  int num_labels = 0;
  std::vector<std::uint8_t> allowed;  // (K+2)^2 row-major

  bool allows(int from, int to) const {
    return allowed[static_cast<std::size_t>(from) * (num_labels + 2) + to] != 0;
  }
};

// Hard IOBES chain constraints (B-X only into I-X/E-X, entities must close
// before O/B/S or the end, I/E only continue a same-type chain).
CrfMask iobes_mask(const Vocabulary& vocab);

// f is the n x K emission table. All DPs run in log space.
double crf_score(const std::vector<std::vector<double>>& f, const Tensor& a,
                 const std::vector<int>& y, const CrfMask* mask = nullptr);

double crf_log_partition(const std::vector<std::vector<double>>& f,
                         const Tensor& a, const CrfMask* mask = nullptr);

// log_partition - score. Gold sequences that cross a masked transition are a
// corpus/mask inconsistency and throw.
double crf_nll(const std::vector<std::vector<double>>& f, const Tensor& a,
               const std::vector<int>& y, const CrfMask* mask = nullptr);

struct ViterbiResult {
  std::vector<int> labels;
  double score = 0.0;
};

// Max-score sequence; ties go to the lower label id. A mask that admits no
// sequence at all throws.
ViterbiResult crf_viterbi(const std::vector<std::vector<double>>& f,
                          const Tensor& a, const CrfMask* mask = nullptr);

// Differentiable NLL on the tape: gradients reach the emission nodes and a.
Var crf_nll_graph(Graph& g, const std::vector<Var>& emissions, Tensor& a,
                  const std::vector<int>& gold, const CrfMask* mask = nullptr);

}  // namespace dgner
