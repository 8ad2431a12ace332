#include "dgner/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dgner/errors.hpp"

namespace dgner {

namespace {
void check_dim(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("dimension mismatch in " + what);
}
}  // namespace

Var Graph::make(std::vector<double> val) {
  vals_.push_back(std::move(val));
  grads_.emplace_back(vals_.back().size(), 0.0);
  back_.emplace_back();
  return static_cast<Var>(vals_.size() - 1);
}

Var Graph::input(std::vector<double> v) { return make(std::move(v)); }

Var Graph::lookup(Tensor& t, int row) {
  check_dim(t.shape.size() == 2 && row >= 0 && row < t.rows(), "lookup");
  const int c = t.cols();
  std::vector<double> v(t.values.begin() + static_cast<std::size_t>(row) * c,
                        t.values.begin() + static_cast<std::size_t>(row + 1) * c);
  Var out = make(std::move(v));
  back_[out] = [this, out, &t, row, c] {
    const auto& g = grads_[out];
    for (int j = 0; j < c; ++j) t.grad[static_cast<std::size_t>(row) * c + j] += g[j];
  };
  return out;
}

Var Graph::column(Tensor& t, int col) {
  check_dim(t.shape.size() == 2 && col >= 0 && col < t.cols(), "column");
  const int r = t.rows(), c = t.cols();
  std::vector<double> v(r);
  for (int i = 0; i < r; ++i) v[i] = t.values[static_cast<std::size_t>(i) * c + col];
  Var out = make(std::move(v));
  back_[out] = [this, out, &t, col, r, c] {
    const auto& g = grads_[out];
    for (int i = 0; i < r; ++i) t.grad[static_cast<std::size_t>(i) * c + col] += g[i];
  };
  return out;
}

Var Graph::entry(Tensor& t, int r, int c) {
  check_dim(t.shape.size() == 2 && r >= 0 && r < t.rows() && c >= 0 && c < t.cols(), "entry");
  Var out = make({t.at(r, c)});
  const int cols = t.cols();
  back_[out] = [this, out, &t, r, c, cols] {
    t.grad[static_cast<std::size_t>(r) * cols + c] += grads_[out][0];
  };
  return out;
}

Var Graph::vec_param(Tensor& t) {
  check_dim(t.shape.size() == 1, "vec_param");
  Var out = make(t.values);
  back_[out] = [this, out, &t] {
    const auto& g = grads_[out];
    for (std::size_t i = 0; i < g.size(); ++i) t.grad[i] += g[i];
  };
  return out;
}

Var Graph::linear(Tensor& w, Var x, Tensor& b) {
  const int rows = w.rows(), cols = w.cols();
  check_dim(size(x) == cols && b.shape.size() == 1 && b.shape[0] == rows, "linear");
  const auto& xv = vals_[x];
  std::vector<double> v(rows);
  for (int i = 0; i < rows; ++i) {
    double s = b.values[i];
    const double* wr = &w.values[static_cast<std::size_t>(i) * cols];
    for (int j = 0; j < cols; ++j) s += wr[j] * xv[j];
    v[i] = s;
  }
  Var out = make(std::move(v));
  back_[out] = [this, out, &w, &b, x, rows, cols] {
    const auto& g = grads_[out];
    const auto& xv = vals_[x];
    auto& xg = grads_[x];
    for (int i = 0; i < rows; ++i) {
      const double gi = g[i];
      b.grad[i] += gi;
      const double* wr = &w.values[static_cast<std::size_t>(i) * cols];
      double* wg = &w.grad[static_cast<std::size_t>(i) * cols];
      for (int j = 0; j < cols; ++j) {
        wg[j] += gi * xv[j];
        xg[j] += gi * wr[j];
      }
    }
  };
  return out;
}

Var Graph::matvec(Tensor& w, Var x) {
  const int rows = w.rows(), cols = w.cols();
  check_dim(size(x) == cols, "matvec");
  const auto& xv = vals_[x];
  std::vector<double> v(rows);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    const double* wr = &w.values[static_cast<std::size_t>(i) * cols];
    for (int j = 0; j < cols; ++j) s += wr[j] * xv[j];
    v[i] = s;
  }
  Var out = make(std::move(v));
  back_[out] = [this, out, &w, x, rows, cols] {
    const auto& g = grads_[out];
    const auto& xv = vals_[x];
    auto& xg = grads_[x];
    for (int i = 0; i < rows; ++i) {
      const double gi = g[i];
      const double* wr = &w.values[static_cast<std::size_t>(i) * cols];
      double* wg = &w.grad[static_cast<std::size_t>(i) * cols];
      for (int j = 0; j < cols; ++j) {
        wg[j] += gi * xv[j];
        xg[j] += gi * wr[j];
      }
    }
  };
  return out;
}

Var Graph::add(Var a, Var b) {
  check_dim(size(a) == size(b), "add");
  std::vector<double> v(vals_[a]);
  const auto& bv = vals_[b];
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += bv[i];
  Var out = make(std::move(v));
  back_[out] = [this, out, a, b] {
    const auto& g = grads_[out];
    auto& ga = grads_[a];
    auto& gb = grads_[b];
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] += g[i];
    }
  };
  return out;
}

Var Graph::sum(const std::vector<Var>& xs) {
  check_dim(!xs.empty(), "sum");
  std::vector<double> v(vals_[xs[0]].size(), 0.0);
  for (Var x : xs) {
    check_dim(size(x) == static_cast<int>(v.size()), "sum");
    const auto& xv = vals_[x];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += xv[i];
  }
  Var out = make(std::move(v));
  back_[out] = [this, out, xs] {
    const auto& g = grads_[out];
    for (Var x : xs) {
      auto& gx = grads_[x];
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
  };
  return out;
}

Var Graph::mul(Var a, Var b) {
  check_dim(size(a) == size(b), "mul");
  std::vector<double> v(vals_[a]);
  const auto& bv = vals_[b];
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= bv[i];
  Var out = make(std::move(v));
  back_[out] = [this, out, a, b] {
    const auto& g = grads_[out];
    const auto& av = vals_[a];
    const auto& bv = vals_[b];
    auto& ga = grads_[a];
    auto& gb = grads_[b];
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i] * bv[i];
      gb[i] += g[i] * av[i];
    }
  };
  return out;
}

Var Graph::scale(Var a, double c) {
  std::vector<double> v(vals_[a]);
  for (double& x : v) x *= c;
  Var out = make(std::move(v));
  back_[out] = [this, out, a, c] {
    const auto& g = grads_[out];
    auto& ga = grads_[a];
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += c * g[i];
  };
  return out;
}

Var Graph::scale_by(Var a, Var s) {
  check_dim(size(s) == 1, "scale_by");
  const double sv = vals_[s][0];
  std::vector<double> v(vals_[a]);
  for (double& x : v) x *= sv;
  Var out = make(std::move(v));
  back_[out] = [this, out, a, s] {
    const auto& g = grads_[out];
    const auto& av = vals_[a];
    const double sv = vals_[s][0];
    auto& ga = grads_[a];
    double ds = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += sv * g[i];
      ds += g[i] * av[i];
    }
    grads_[s][0] += ds;
  };
  return out;
}

Var Graph::concat(const std::vector<Var>& xs) {
  check_dim(!xs.empty(), "concat");
  std::vector<double> v;
  for (Var x : xs) v.insert(v.end(), vals_[x].begin(), vals_[x].end());
  Var out = make(std::move(v));
  back_[out] = [this, out, xs] {
    const auto& g = grads_[out];
    std::size_t off = 0;
    for (Var x : xs) {
      auto& gx = grads_[x];
      for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += g[off + i];
      off += gx.size();
    }
  };
  return out;
}

Var Graph::slice(Var a, int off, int len) {
  check_dim(off >= 0 && len > 0 && off + len <= size(a), "slice");
  std::vector<double> v(vals_[a].begin() + off, vals_[a].begin() + off + len);
  Var out = make(std::move(v));
  back_[out] = [this, out, a, off, len] {
    const auto& g = grads_[out];
    auto& ga = grads_[a];
    for (int i = 0; i < len; ++i) ga[off + i] += g[i];
  };
  return out;
}

Var Graph::tanh(Var a) {
  std::vector<double> v(vals_[a]);
  for (double& x : v) x = std::tanh(x);
  Var out = make(std::move(v));
  back_[out] = [this, out, a] {
    const auto& g = grads_[out];
    const auto& y = vals_[out];
    auto& ga = grads_[a];
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  };
  return out;
}

Var Graph::sigmoid(Var a) {
  std::vector<double> v(vals_[a]);
  for (double& x : v) x = 1.0 / (1.0 + std::exp(-x));
  Var out = make(std::move(v));
  back_[out] = [this, out, a] {
    const auto& g = grads_[out];
    const auto& y = vals_[out];
    auto& ga = grads_[a];
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  };
  return out;
}

Var Graph::relu(Var a) {
  std::vector<double> v(vals_[a]);
  for (double& x : v) x = x > 0.0 ? x : 0.0;
  Var out = make(std::move(v));
  back_[out] = [this, out, a] {
    const auto& g = grads_[out];
    const auto& x = vals_[a];
    auto& ga = grads_[a];
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] > 0.0) ga[i] += g[i];
  };
  return out;
}

Var Graph::logsumexp(Var a) {
  const auto& x = vals_[a];
  check_dim(!x.empty(), "logsumexp");
  const double m = *std::max_element(x.begin(), x.end());
  double s = 0.0;
  for (double xi : x) s += std::exp(xi - m);
  Var out = make({m + std::log(s)});
  back_[out] = [this, out, a] {
    const double g = grads_[out][0];
    const double y = vals_[out][0];
    const auto& x = vals_[a];
    auto& ga = grads_[a];
    for (std::size_t i = 0; i < x.size(); ++i) ga[i] += g * std::exp(x[i] - y);
  };
  return out;
}

Var Graph::pick(Var a, int i) {
  check_dim(i >= 0 && i < size(a), "pick");
  Var out = make({vals_[a][i]});
  back_[out] = [this, out, a, i] { grads_[a][i] += grads_[out][0]; };
  return out;
}

Var Graph::dropout(Var a, double rate, Rng& rng) {
  check_dim(rate >= 0.0 && rate < 1.0, "dropout");
  if (rate == 0.0) return a;
  const double keep = 1.0 - rate;
  std::vector<double> mask(vals_[a].size());
  for (double& m : mask) m = rng.uniform() < rate ? 0.0 : 1.0 / keep;
  std::vector<double> v(vals_[a]);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= mask[i];
  Var out = make(std::move(v));
  back_[out] = [this, out, a, mask = std::move(mask)] {
    const auto& g = grads_[out];
    auto& ga = grads_[a];
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * mask[i];
  };
  return out;
}

double Graph::scalar(Var v) const {
  check_dim(vals_[v].size() == 1, "scalar");
  return vals_[v][0];
}

void Graph::backward(Var loss) {
  check_dim(vals_[loss].size() == 1, "backward");
  for (auto& g : grads_) std::fill(g.begin(), g.end(), 0.0);
  grads_[loss][0] = 1.0;
  for (Var v = static_cast<Var>(back_.size()) - 1; v >= 0; --v)
    if (back_[v]) back_[v]();
}

}  // namespace dgner
