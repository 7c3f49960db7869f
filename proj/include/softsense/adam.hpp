#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "softsense/matrix.hpp"

namespace softsense {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Moment accumulators for one parameter block.
struct AdamState {
  AdamConfig config;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step = 0;

  AdamState() = default;
  AdamState(std::size_t size, AdamConfig cfg);
};

/// Bias-corrected Adam update of `params` in place. Throws ShapeError when the
/// parameter, gradient and accumulator lengths disagree.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);
void adam_step(AdamState& state, Matrix& params, const Matrix& grads);

}  // namespace softsense
