#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "softsense/matrix.hpp"
#include "softsense/rng.hpp"

namespace softsense {

enum class Activation { relu, sigmoid, linear };

std::string_view activation_name(Activation kind);
/// Throws ConfigError on an unknown tag.
Activation activation_from_name(std::string_view name);

/// Numerically stable logistic function.
double sigmoid(double z);

Matrix activation_apply(Activation kind, const Matrix& pre);

/// Fully connected layer: Y = act(X·Wᵀ + b).
struct DenseLayer {
  Matrix weights;             // out_dim × in_dim
  std::vector<double> bias;   // out_dim
  Activation activation = Activation::linear;

  DenseLayer() = default;
  DenseLayer(std::size_t in_dim, std::size_t out_dim, Activation act);

  std::size_t in_dim() const noexcept { return weights.cols(); }
  std::size_t out_dim() const noexcept { return weights.rows(); }
  std::size_t parameter_count() const noexcept { return weights.size() + bias.size(); }

  /// Glorot-uniform weights, zero bias.
  void initialize(Rng& rng);

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

struct DenseCache {
  Matrix input;
  Matrix pre_activation;
  Matrix output;
};

struct DenseGradients {
  Matrix weights;
  std::vector<double> bias;
  Matrix input;
};

Matrix dense_forward(const DenseLayer& layer, const Matrix& x, DenseCache* cache = nullptr);

DenseGradients dense_backward(const DenseLayer& layer, const DenseCache& cache,
                              const Matrix& upstream);

}  // namespace softsense
