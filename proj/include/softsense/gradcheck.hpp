#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "softsense/errors.hpp"

namespace softsense {

/// Central-difference gradient of `loss` at `params`. The parameters are
/// perturbed one coordinate at a time and restored before returning.
inline std::vector<double> finite_difference_grad(const std::function<double()>& loss,
                                                  std::span<double> params, double eps) {
  if (!(eps > 0.0)) {
    throw ConfigError("finite_difference_grad: eps must be positive");
  }
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + eps;
    const double plus = loss();
    params[i] = saved - eps;
    const double minus = loss();
    params[i] = saved;
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw NumericError("finite_difference_grad: non-finite loss at coordinate " +
                         std::to_string(i));
    }
    grad[i] = (plus - minus) / (2.0 * eps);
  }
  return grad;
}

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor).
inline double max_relative_error(std::span<const double> a, std::span<const double> b,
                                 double floor = 1e-8) {
  if (a.size() != b.size()) {
    throw ShapeError("max_relative_error: length mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

}  // namespace softsense
