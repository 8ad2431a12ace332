#include "dgner/lstm.hpp"

#include <algorithm>

#include "dgner/errors.hpp"

namespace dgner {

LstmParams make_lstm_params(ParamStore& store, const std::string& prefix,
                            int input_dim, int hidden) {
  LstmParams p;
  p.hidden = hidden;
  p.wx = store.has(prefix + "/wx") ? &store.at(prefix + "/wx")
                                   : &store.add_matrix(prefix + "/wx", 4 * hidden, input_dim);
  p.wh = store.has(prefix + "/wh") ? &store.at(prefix + "/wh")
                                   : &store.add_matrix(prefix + "/wh", 4 * hidden, hidden);
  p.b = store.has(prefix + "/b") ? &store.at(prefix + "/b")
                                 : &store.add_vector(prefix + "/b", 4 * hidden);
  return p;
}

std::pair<Var, Var> lstm_cell(Graph& g, Var x, Var h_prev, Var c_prev,
                              const LstmParams& p) {
  const int h = p.hidden;
  if (g.size(h_prev) != h || g.size(c_prev) != h)
    throw ConfigError("lstm_cell: state size does not match hidden size");
  Var gates = g.add(g.linear(*p.wx, x, *p.b), g.matvec(*p.wh, h_prev));
  Var in = g.sigmoid(g.slice(gates, 0, h));
  Var forget = g.sigmoid(g.slice(gates, h, h));
  Var out = g.sigmoid(g.slice(gates, 2 * h, h));
  Var cand = g.tanh(g.slice(gates, 3 * h, h));
  Var c_t = g.add(g.mul(forget, c_prev), g.mul(in, cand));
  Var h_t = g.mul(out, g.tanh(c_t));
  return {h_t, c_t};
}

std::vector<Var> lstm_run(Graph& g, const std::vector<Var>& seq,
                          const LstmParams& p, bool reverse) {
  if (seq.empty()) throw DataError("lstm_run: empty sequence");
  const int n = static_cast<int>(seq.size());
  Var h = g.input(std::vector<double>(p.hidden, 0.0));
  Var c = g.input(std::vector<double>(p.hidden, 0.0));
  std::vector<Var> hs(n);
  for (int step = 0; step < n; ++step) {
    const int i = reverse ? n - 1 - step : step;
    std::tie(h, c) = lstm_cell(g, seq[i], h, c, p);
    hs[i] = h;
  }
  return hs;
}

std::vector<Var> bilstm(Graph& g, const std::vector<Var>& seq,
                        const LstmParams& fwd, const LstmParams& bwd) {
  std::vector<Var> f = lstm_run(g, seq, fwd, false);
  std::vector<Var> b = lstm_run(g, seq, bwd, true);
  std::vector<Var> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out[i] = g.concat({f[i], b[i]});
  return out;
}

}  // namespace dgner
