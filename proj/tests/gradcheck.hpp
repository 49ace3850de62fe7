#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

// Central finite differences against an analytic gradient. Returns the
// vector-level relative error ||g_a - g_fd|| / max(||g_a||, ||g_fd||, tiny).

namespace testutil {

struct GradCheckResult {
  double relative_error = 0.0;
  std::vector<double> analytic;
  std::vector<double> numeric;
};

// eval(params) -> scalar objective; eval must not mutate anything observable.
inline GradCheckResult finite_difference_check(
    std::span<double> params, std::span<const double> analytic_grad,
    const std::function<double()>& eval, double eps = 1e-5) {
  GradCheckResult r;
  r.analytic.assign(analytic_grad.begin(), analytic_grad.end());
  r.numeric.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    double saved = params[i];
    params[i] = saved + eps;
    double plus = eval();
    params[i] = saved - eps;
    double minus = eval();
    params[i] = saved;
    r.numeric[i] = (plus - minus) / (2.0 * eps);
  }
  double diff = 0.0, na = 0.0, nf = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    double d = r.analytic[i] - r.numeric[i];
    diff += d * d;
    na += r.analytic[i] * r.analytic[i];
    nf += r.numeric[i] * r.numeric[i];
  }
  r.relative_error = std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nf), 1e-12});
  return r;
}

}  // namespace testutil
