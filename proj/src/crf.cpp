#include "dgner/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dgner/errors.hpp"

namespace dgner {

namespace {

double raw_logsumexp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double trans(const Tensor& a, const CrfMask* mask, int from, int to) {
  double v = a.at(from, to);
  if (mask && !mask->allows(from, to)) v += kMaskPenalty;
  return v;
}

void check_instance(const std::vector<std::vector<double>>& f, const Tensor& a) {
  if (f.empty()) throw DataError("CRF needs at least one position");
  const int k = static_cast<int>(f[0].size());
  if (k < 1) throw ConfigError("CRF needs at least one label");
  if (a.shape.size() != 2 || a.rows() != k + 2 || a.cols() != k + 2)
    throw ConfigError("transition matrix shape does not match label count");
  for (const auto& row : f)
    if (static_cast<int>(row.size()) != k)
      throw ConfigError("ragged emission table");
}

}  // namespace

CrfMask iobes_mask(const Vocabulary& vocab) {
  const int k = vocab.num_labels();
  CrfMask m;
  m.num_labels = k;
  m.allowed.assign(static_cast<std::size_t>(k + 2) * (k + 2), 0);
  auto set = [&](int from, int to) {
    m.allowed[static_cast<std::size_t>(from) * (k + 2) + to] = 1;
  };
  auto prefix = [&](int id) { return vocab.label(id)[0]; };
  auto type = [&](int id) {
    const std::string& tag = vocab.label(id);
    return tag.size() >= 3 ? tag.substr(2) : std::string();
  };
  const int start = crf_start(k), end = crf_end(k);
  for (int i = 0; i < k; ++i) {
    const char pi = prefix(i);
    const bool i_open = pi == 'B' || pi == 'I';  // chain still open after i
    if (!i_open) set(i, end);
    for (int j = 0; j < k; ++j) {
      const char pj = prefix(j);
      if (i_open) {
        if ((pj == 'I' || pj == 'E') && type(i) == type(j)) set(i, j);
      } else {
        if (pj == 'O' || pj == 'B' || pj == 'S') set(i, j);
      }
    }
  }
  for (int j = 0; j < k; ++j) {
    const char pj = prefix(j);
    if (pj == 'O' || pj == 'B' || pj == 'S') set(start, j);
  }
  return m;
}

double crf_score(const std::vector<std::vector<double>>& f, const Tensor& a,
                 const std::vector<int>& y, const CrfMask* mask) {
  check_instance(f, a);
  const int n = static_cast<int>(f.size());
  const int k = static_cast<int>(f[0].size());
  if (static_cast<int>(y.size()) != n)
    throw ConfigError("label sequence length does not match emissions");
  for (int yi : y)
    if (yi < 0 || yi >= k) throw ConfigError("label id out of range");
  double s = trans(a, mask, crf_start(k), y[0]);
  for (int i = 0; i < n; ++i) {
    s += f[i][y[i]];
    if (i + 1 < n) s += trans(a, mask, y[i], y[i + 1]);
  }
  s += trans(a, mask, y[n - 1], crf_end(k));
  return s;
}

double crf_log_partition(const std::vector<std::vector<double>>& f,
                         const Tensor& a, const CrfMask* mask) {
  check_instance(f, a);
  const int n = static_cast<int>(f.size());
  const int k = static_cast<int>(f[0].size());
  std::vector<double> alpha(k), next(k), cand(k);
  for (int j = 0; j < k; ++j)
    alpha[j] = trans(a, mask, crf_start(k), j) + f[0][j];
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      for (int p = 0; p < k; ++p) cand[p] = alpha[p] + trans(a, mask, p, j);
      next[j] = raw_logsumexp(cand) + f[i][j];
    }
    alpha.swap(next);
  }
  for (int j = 0; j < k; ++j) alpha[j] += trans(a, mask, j, crf_end(k));
  return raw_logsumexp(alpha);
}

namespace {
void check_gold_allowed(const std::vector<int>& y, int k, const CrfMask* mask) {
  if (!mask) return;
  if (!mask->allows(crf_start(k), y[0]))
    throw DataError("gold label sequence starts with a masked transition");
  for (std::size_t i = 0; i + 1 < y.size(); ++i)
    if (!mask->allows(y[i], y[i + 1]))
      throw DataError("gold label sequence crosses a masked transition at position " +
                      std::to_string(i + 2));
  if (!mask->allows(y.back(), crf_end(k)))
    throw DataError("gold label sequence ends with a masked transition");
}
}  // namespace

double crf_nll(const std::vector<std::vector<double>>& f, const Tensor& a,
               const std::vector<int>& y, const CrfMask* mask) {
  check_instance(f, a);
  check_gold_allowed(y, static_cast<int>(f[0].size()), mask);
  return crf_log_partition(f, a, mask) - crf_score(f, a, y, mask);
}

ViterbiResult crf_viterbi(const std::vector<std::vector<double>>& f,
                          const Tensor& a, const CrfMask* mask) {
  check_instance(f, a);
  const int n = static_cast<int>(f.size());
  const int k = static_cast<int>(f[0].size());
  std::vector<std::vector<double>> delta(n, std::vector<double>(k));
  std::vector<std::vector<int>> back(n, std::vector<int>(k, -1));
  for (int j = 0; j < k; ++j)
    delta[0][j] = trans(a, mask, crf_start(k), j) + f[0][j];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < k; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      int arg = -1;
      for (int p = 0; p < k; ++p) {
        const double s = delta[i - 1][p] + trans(a, mask, p, j);
        if (s > best) {
          best = s;
          arg = p;
        }
      }
      delta[i][j] = best + f[i][j];
      back[i][j] = arg;
    }
  double best = -std::numeric_limits<double>::infinity();
  int arg = -1;
  for (int j = 0; j < k; ++j) {
    const double s = delta[n - 1][j] + trans(a, mask, j, crf_end(k));
    if (s > best) {
      best = s;
      arg = j;
    }
  }
  if (best <= kMaskPenalty / 2)
    throw DataError("transition mask admits no label sequence");
  ViterbiResult r;
  r.score = best;
  r.labels.assign(n, 0);
  r.labels[n - 1] = arg;
  for (int i = n - 1; i > 0; --i) r.labels[i - 1] = back[i][r.labels[i]];
  return r;
}

Var crf_nll_graph(Graph& g, const std::vector<Var>& emissions, Tensor& a,
                  const std::vector<int>& gold, const CrfMask* mask) {
  if (emissions.empty()) throw DataError("CRF needs at least one position");
  const int n = static_cast<int>(emissions.size());
  const int k = g.size(emissions[0]);
  if (a.shape.size() != 2 || a.rows() != k + 2 || a.cols() != k + 2)
    throw ConfigError("transition matrix shape does not match label count");
  if (static_cast<int>(gold.size()) != n)
    throw ConfigError("label sequence length does not match emissions");
  check_gold_allowed(gold, k, mask);
  const int start = crf_start(k), end = crf_end(k);

  // Additive penalty vectors realizing the mask on the tape.
  auto penalty_into = [&](int to_label) {
    std::vector<double> pen(k, 0.0);
    if (mask)
      for (int p = 0; p < k; ++p)
        if (!mask->allows(p, to_label)) pen[p] = kMaskPenalty;
    return pen;
  };

  Var start_row = g.slice(g.lookup(a, start), 0, k);
  if (mask) {
    std::vector<double> pen(k, 0.0);
    for (int j = 0; j < k; ++j)
      if (!mask->allows(start, j)) pen[j] = kMaskPenalty;
    start_row = g.add(start_row, g.input(std::move(pen)));
  }
  Var alpha = g.add(start_row, emissions[0]);
  for (int i = 1; i < n; ++i) {
    std::vector<Var> scores(k);
    for (int j = 0; j < k; ++j) {
      Var col = g.slice(g.column(a, j), 0, k);
      if (mask) col = g.add(col, g.input(penalty_into(j)));
      scores[j] = g.logsumexp(g.add(alpha, col));
    }
    alpha = g.add(g.concat(scores), emissions[i]);
  }
  Var end_col = g.slice(g.column(a, end), 0, k);
  if (mask) end_col = g.add(end_col, g.input(penalty_into(end)));
  Var log_z = g.logsumexp(g.add(alpha, end_col));

  std::vector<Var> path;
  path.reserve(2 * n + 1);
  path.push_back(g.entry(a, start, gold[0]));
  for (int i = 0; i < n; ++i) {
    path.push_back(g.pick(emissions[i], gold[i]));
    if (i + 1 < n) path.push_back(g.entry(a, gold[i], gold[i + 1]));
  }
  path.push_back(g.entry(a, gold[n - 1], end));
  return g.add(log_z, g.scale(g.sum(path), -1.0));
}

}  // namespace dgner
