#include "dgner/param_store.hpp"

#include <cmath>
#include <stdexcept>

#include "dgner/errors.hpp"

namespace dgner {

Tensor& ParamStore::insert(const std::string& name, std::vector<int> shape) {
  if (params_.count(name)) throw ConfigError("duplicate parameter name: " + name);
  auto [it, ok] = params_.emplace(name, Tensor(std::move(shape), /*with_grad=*/true));
  (void)ok;
  return it->second;
}

Tensor& ParamStore::add_matrix(const std::string& name, int rows, int cols) {
  Tensor& t = insert(name, {rows, cols});
  const double bound = std::sqrt(6.0 / (rows + cols));
  for (double& v : t.values) v = init_rng_.uniform(-bound, bound);
  return t;
}

Tensor& ParamStore::add_vector(const std::string& name, int n) {
  return insert(name, {n});
}

Tensor& ParamStore::add_embedding(const std::string& name, int rows, int cols) {
  Tensor& t = insert(name, {rows, cols});
  for (double& v : t.values) v = init_rng_.uniform(-0.1, 0.1);
  return t;
}

Tensor& ParamStore::put(const std::string& name, std::vector<int> shape,
                        std::vector<double> values, bool trainable) {
  Tensor& t = insert(name, std::move(shape));
  if (values.size() != t.values.size())
    throw ConfigError("value count does not match shape for parameter '" +
                      name + "'");
  t.values = std::move(values);
  t.trainable = trainable;
  return t;
}

Tensor& ParamStore::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw ConfigError("unknown parameter: " + name);
  return it->second;
}

const Tensor& ParamStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw ConfigError("unknown parameter: " + name);
  return it->second;
}

void ParamStore::zero_grads() {
  for (auto& [name, t] : params_) t.zero_grad();
}

double ParamStore::grad_norm() const {
  double sq = 0.0;
  for (const auto& [name, t] : params_)
    for (double g : t.grad) sq += g * g;
  return std::sqrt(sq);
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, t] : params_) n += t.numel();
  return n;
}

void ParamStore::sgd_step(double lr, double l2, double clip) {
  for (const auto& [name, t] : params_)
    for (double g : t.grad)
      if (!std::isfinite(g))
        throw NumericError("non-finite gradient in parameter '" + name + "'");

  double scale = 1.0;
  if (clip > 0.0) {
    const double norm = grad_norm();
    if (norm > clip) scale = clip / norm;
  }
  for (auto& [name, t] : params_) {
    if (t.trainable) {
      for (std::size_t i = 0; i < t.values.size(); ++i)
        t.values[i] -= lr * (scale * t.grad[i] + l2 * t.values[i]);
    }
    t.zero_grad();
  }
}

}  // namespace dgner
