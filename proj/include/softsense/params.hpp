#pragma once

#include <cstddef>
#include <vector>

namespace softsense {

struct LayerParamCounts {
  std::size_t in_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t encoder = 0;    // (in+1)·hidden
  std::size_t decoder_x = 0;  // (hidden+1)·in
  std::size_t decoder_y = 0;  // (hidden+1)·head_units
};

struct ParamCounts {
  std::size_t head_units = 0;
  std::vector<LayerParamCounts> layers;
  std::size_t classifier = 0;         // (last_hidden+1)·head_units
  std::size_t total = 0;
  std::size_t plain_autoencoder = 0;  // encoders + decoder_x only
  std::size_t head_overhead = 0;      // decoder_y + classifier
  double overhead_ratio = 0.0;        // head_overhead / plain_autoencoder
};

/// Closed-form parameter accounting of a stacked multi-headed QAE. Throws
/// ConfigError for an empty or zero-width configuration.
ParamCounts count_parameters(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                             std::size_t head_units);

/// Weights and biases of an MLP classifier (relu hidden layers, head output).
std::size_t mlp_parameter_count(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                                std::size_t head_units);

}  // namespace softsense
