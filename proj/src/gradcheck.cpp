#include "dgner/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace dgner {

GradCheckReport grad_check(const std::function<double()>& loss_fn,
                           ParamStore& store, double eps) {
  store.zero_grads();
  loss_fn();
  std::map<std::string, std::vector<double>> analytic;
  for (const auto& [name, t] : store.params()) analytic[name] = t.grad;

  GradCheckReport report;
  for (auto& [name, t] : store.params()) {
    if (!t.trainable) continue;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const double saved = t.values[i];
      t.values[i] = saved + eps;
      store.zero_grads();
      const double plus = loss_fn();
      t.values[i] = saved - eps;
      store.zero_grads();
      const double minus = loss_fn();
      t.values[i] = saved;
      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[name][i];
      const double rel =
          std::abs(a - numeric) / std::max({1.0, std::abs(a), std::abs(numeric)});
      if (rel > report.max_rel_err) {
        report.max_rel_err = rel;
        report.worst_param = name;
        report.worst_index = i;
        report.analytic = a;
        report.numeric = numeric;
      }
    }
  }
  store.zero_grads();
  return report;
}

}  // namespace dgner
