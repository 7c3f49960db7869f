#include "softsense/adam.hpp"

#include <cmath>
#include <string>

#include "softsense/errors.hpp"

namespace softsense {

AdamState::AdamState(std::size_t size, AdamConfig cfg)
    : config(cfg), first_moment(size, 0.0), second_moment(size, 0.0) {}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw ShapeError("adam_step: params " + std::to_string(params.size()) + ", grads " +
                     std::to_string(grads.size()) + ", state " +
                     std::to_string(state.first_moment.size()));
  }
  const AdamConfig& c = state.config;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = c.beta1 * m + (1.0 - c.beta1) * g;
    v = c.beta2 * v + (1.0 - c.beta2) * g * g;
    const double m_hat = m / correction1;
    const double v_hat = v / correction2;
    params[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
}

void adam_step(AdamState& state, Matrix& params, const Matrix& grads) {
  require_same_shape(params, grads, "adam_step");
  adam_step(state, params.values(), grads.values());
}

}  // namespace softsense
