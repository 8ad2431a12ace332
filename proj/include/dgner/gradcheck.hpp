#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "dgner/param_store.hpp"

namespace dgner {

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Central-difference check of every trainable scalar in the store.
//
// loss_fn must evaluate the loss at the store's current values, run backward
// so gradients land in the store, and return the loss. It has to be
// deterministic across calls (same values in -> same loss out); grad_check
// zeroes gradients around each probe itself.
//
// Relative error per scalar: |analytic - numeric| / max(1, |analytic|, |numeric|).
GradCheckReport grad_check(const std::function<double()>& loss_fn,
                           ParamStore& store, double eps = 1e-5);

}  // namespace dgner
