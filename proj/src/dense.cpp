#include "softsense/dense.hpp"

#include <cmath>

#include "softsense/errors.hpp"

namespace softsense {

std::string_view activation_name(Activation kind) {
  switch (kind) {
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::linear: return "linear";
  }
  return "linear";
}

Activation activation_from_name(std::string_view name) {
  if (name == "relu") return Activation::relu;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "linear") return Activation::linear;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Matrix activation_apply(Activation kind, const Matrix& pre) {
  Matrix out = pre;
  switch (kind) {
    case Activation::relu:
      for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
      break;
    case Activation::sigmoid:
      for (double& v : out.values()) v = sigmoid(v);
      break;
    case Activation::linear:
      break;
  }
  return out;
}

DenseLayer::DenseLayer(std::size_t in_dim, std::size_t out_dim, Activation act)
    : weights(out_dim, in_dim), bias(out_dim, 0.0), activation(act) {
  if (in_dim == 0 || out_dim == 0) {
    throw ConfigError("dense layer dimensions must be positive, got " +
                      std::to_string(in_dim) + " -> " + std::to_string(out_dim));
  }
}

void DenseLayer::initialize(Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(in_dim() + out_dim()));
  for (double& w : weights.values()) w = rng.uniform(-limit, limit);
  std::fill(bias.begin(), bias.end(), 0.0);
}

Matrix dense_forward(const DenseLayer& layer, const Matrix& x, DenseCache* cache) {
  if (x.cols() != layer.in_dim()) {
    throw ShapeError("dense_forward: input " + x.shape_string() + " does not match layer " +
                     layer.weights.shape_string() + " (expects " +
                     std::to_string(layer.in_dim()) + " columns)");
  }
  Matrix pre = matmul_nt(x, layer.weights);
  for (std::size_t r = 0; r < pre.rows(); ++r) {
    auto row = pre.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += layer.bias[c];
  }
  Matrix out = activation_apply(layer.activation, pre);
  if (cache != nullptr) {
    cache->input = x;
    cache->pre_activation = std::move(pre);
    cache->output = out;
  }
  return out;
}

DenseGradients dense_backward(const DenseLayer& layer, const DenseCache& cache,
                              const Matrix& upstream) {
  if (cache.input.cols() != layer.in_dim() || cache.pre_activation.cols() != layer.out_dim() ||
      cache.input.rows() != cache.pre_activation.rows()) {
    throw InternalError("dense_backward: cache " + cache.input.shape_string() + "/" +
                        cache.pre_activation.shape_string() +
                        " inconsistent with layer " + layer.weights.shape_string());
  }
  require_same_shape(upstream, cache.pre_activation, "dense_backward upstream");

  Matrix delta = upstream;
  switch (layer.activation) {
    case Activation::relu: {
      auto d = delta.values();
      const auto z = cache.pre_activation.values();
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (!(z[i] > 0.0)) d[i] = 0.0;
      }
      break;
    }
    case Activation::sigmoid: {
      auto d = delta.values();
      const auto y = cache.output.values();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] *= y[i] * (1.0 - y[i]);
      break;
    }
    case Activation::linear:
      break;
  }

  DenseGradients grads;
  grads.weights = matmul_tn(delta, cache.input);
  grads.bias.assign(layer.out_dim(), 0.0);
  for (std::size_t r = 0; r < delta.rows(); ++r) {
    const auto row = delta.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) grads.bias[c] += row[c];
  }
  grads.input = matmul(delta, layer.weights);
  return grads;
}

}  // namespace softsense
