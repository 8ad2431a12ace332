#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dgner/graph.hpp"
#include "dgner/param_store.hpp"

namespace dgner {

// One direction of an LSTM. Gate weights are packed 4H-wide in the order
// input, forget, output, candidate.
struct LstmParams {
  Tensor* wx = nullptr;  // (4H, input_dim)
  Tensor* wh = nullptr;  // (4H, H)
  Tensor* b = nullptr;   // (4H)
  int hidden = 0;
};

// Registers <prefix>/wx, <prefix>/wh, <prefix>/b in the store (or reuses
// them when already present, e.g. after a checkpoint load).
LstmParams make_lstm_params(ParamStore& store, const std::string& prefix,
                            int input_dim, int hidden);

// Standard gated update; returns (h_t, c_t).
std::pair<Var, Var> lstm_cell(Graph& g, Var x, Var h_prev, Var c_prev,
                              const LstmParams& p);

// Runs one direction over the sequence from zero state; returns hidden states
// in input order.
std::vector<Var> lstm_run(Graph& g, const std::vector<Var>& seq,
                          const LstmParams& p, bool reverse);

// output[i] = [fwd hidden at i ; bwd hidden at i], dim 2H.
std::vector<Var> bilstm(Graph& g, const std::vector<Var>& seq,
                        const LstmParams& fwd, const LstmParams& bwd);

}  // namespace dgner
