#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dgner/rng.hpp"
#include "dgner/tensor.hpp"

namespace dgner {

// Node handle into a Graph tape.
using Var = std::int32_t;

// Reverse-mode tape over vector-valued nodes. Values are computed eagerly;
// backward() replays the tape in reverse. Parameter tensors participate
// directly (gradients accumulate into Tensor::grad), so one Graph per
// loss evaluation and ParamStore::zero_grads() between evaluations.
class Graph {
 public:
  // Leaves -------------------------------------------------------------
  Var input(std::vector<double> v);             // constant, grads ignored
  Var lookup(Tensor& t, int row);               // row of a rank-2 tensor
  Var column(Tensor& t, int col);               // column of a rank-2 tensor
  Var entry(Tensor& t, int r, int c);           // single matrix cell, size-1 node
  Var vec_param(Tensor& t);                     // whole rank-1 tensor

  // Linear maps (weights bypass the tape and accumulate straight into grad)
  Var linear(Tensor& w, Var x, Tensor& b);      // w·x + b
  Var matvec(Tensor& w, Var x);                 // w·x

  // Elementwise / structural -------------------------------------------
  Var add(Var a, Var b);
  Var sum(const std::vector<Var>& xs);          // elementwise sum, equal sizes
  Var mul(Var a, Var b);                        // elementwise product
  Var scale(Var a, double c);
  Var scale_by(Var a, Var s);                   // s is size-1
  Var concat(const std::vector<Var>& xs);
  Var slice(Var a, int off, int len);
  Var tanh(Var a);
  Var sigmoid(Var a);
  Var relu(Var a);
  Var logsumexp(Var a);                         // size-1, max-shifted
  Var pick(Var a, int i);                       // size-1
  Var dropout(Var a, double rate, Rng& rng);    // inverted scaling, mask kept for backward

  // Access -------------------------------------------------------------
  const std::vector<double>& value(Var v) const { return vals_[v]; }
  double scalar(Var v) const;                   // value of a size-1 node
  int size(Var v) const { return static_cast<int>(vals_[v].size()); }
  std::size_t node_count() const { return vals_.size(); }

  // Seeds d(loss)=1 and runs every recorded closure in reverse order.
  // loss must be a size-1 node.
  void backward(Var loss);

 private:
  Var make(std::vector<double> val);
  std::vector<double>& grad(Var v) { return grads_[v]; }

  std::vector<std::vector<double>> vals_;
  std::vector<std::vector<double>> grads_;
  std::vector<std::function<void()>> back_;     // empty function for leaves
};

}  // namespace dgner
