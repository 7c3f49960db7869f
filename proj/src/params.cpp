#include "softsense/params.hpp"

#include <string>

#include "softsense/errors.hpp"

namespace softsense {

ParamCounts count_parameters(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                             std::size_t head_units) {
  if (hidden_dims.empty()) {
    throw ConfigError("count_parameters: at least one hidden layer is required");
  }
  if (input_dim == 0 || head_units == 0) {
    throw ConfigError("count_parameters: dimensions must be positive");
  }
  if (head_units % 2 != 0) {
    throw ConfigError("count_parameters: head_units must be even, got " + std::to_string(head_units));
  }
  ParamCounts out;
  out.head_units = head_units;
  std::size_t in = input_dim;
  for (const std::size_t hidden : hidden_dims) {
    if (hidden == 0) throw ConfigError("count_parameters: hidden widths must be positive");
    LayerParamCounts layer{in, hidden, (in + 1) * hidden, (hidden + 1) * in,
                           (hidden + 1) * head_units};
    out.plain_autoencoder += layer.encoder + layer.decoder_x;
    out.head_overhead += layer.decoder_y;
    out.layers.push_back(layer);
    in = hidden;
  }
  out.classifier = (in + 1) * head_units;
  out.head_overhead += out.classifier;
  out.total = out.plain_autoencoder + out.head_overhead;
  out.overhead_ratio =
      static_cast<double>(out.head_overhead) / static_cast<double>(out.plain_autoencoder);
  return out;
}

std::size_t mlp_parameter_count(std::size_t input_dim, const std::vector<std::size_t>& hidden_dims,
                                std::size_t head_units) {
  std::size_t total = 0;
  std::size_t in = input_dim;
  for (const std::size_t h : hidden_dims) {
    total += (in + 1) * h;
    in = h;
  }
  return total + (in + 1) * head_units;
}

}  // namespace softsense
