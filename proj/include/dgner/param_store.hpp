#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "dgner/rng.hpp"
#include "dgner/tensor.hpp"

namespace dgner {

// Named trainable parameters. Iteration order is sorted by name, and every
// initialization draw comes from the seeded stream in creation order, so a
// given construction sequence is reproducible from the seed alone.
class ParamStore {
 public:
  explicit ParamStore(std::uint64_t seed) : seed_(seed), init_rng_(Rng::derive(seed, 0)) {}

  std::uint64_t seed() const { return seed_; }

  // Weight matrix, uniform(-sqrt(6/(fan_in+fan_out)), +...).
  Tensor& add_matrix(const std::string& name, int rows, int cols);
  // Bias vector, zeros.
  Tensor& add_vector(const std::string& name, int n);
  // Embedding table, uniform(-0.1, 0.1) rows.
  Tensor& add_embedding(const std::string& name, int rows, int cols);

  bool has(const std::string& name) const { return params_.count(name) != 0; }
  Tensor& at(const std::string& name);
  const Tensor& at(const std::string& name) const;

  // Installs a tensor with explicit contents (checkpoint deserialization);
  // draws nothing from the init stream.
  Tensor& put(const std::string& name, std::vector<int> shape,
              std::vector<double> values, bool trainable);

  std::map<std::string, Tensor>& params() { return params_; }
  const std::map<std::string, Tensor>& params() const { return params_; }

  void zero_grads();
  double grad_norm() const;
  std::size_t scalar_count() const;

  // Global-norm clip (when clip > 0), then p -= lr * (grad + l2 * p), then
  // zero all gradients. Throws NumericError naming the first parameter with
  // a non-finite gradient.
  void sgd_step(double lr, double l2, double clip);

 private:
  Tensor& insert(const std::string& name, std::vector<int> shape);

  std::uint64_t seed_;
  Rng init_rng_;
  std::map<std::string, Tensor> params_;
};

// Free-function spelling used by the training loop.
inline void sgd_step(ParamStore& store, double lr, double l2, double clip) {
  store.sgd_step(lr, l2, clip);
}

}  // namespace dgner
