#pragma once

#include <cassert>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "dgner/errors.hpp"

namespace dgner {

// Dense 64-bit float array with an optional same-shape gradient buffer.
// Rank 1 (vectors) and rank 2 (matrices) are all the models need.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> values;
  std::vector<double> grad;
  bool trainable = true;

  Tensor() = default;
  Tensor(std::vector<int> s, bool with_grad) : shape(std::move(s)) {
    values.assign(numel(), 0.0);
    if (with_grad) grad.assign(numel(), 0.0);
  }

  std::size_t numel() const {
    std::size_t n = 1;
    for (int d : shape) n *= static_cast<std::size_t>(d);
    return n;
  }

  int rows() const { return shape.empty() ? 0 : shape[0]; }
  int cols() const {
    assert(shape.size() == 2);
    return shape[1];
  }

  double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols() + c]; }

  void zero_grad() {
    std::fill(grad.begin(), grad.end(), 0.0);
  }
};

}  // namespace dgner
