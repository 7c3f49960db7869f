#include "softsense/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softsense/dense.hpp"
#include "softsense/errors.hpp"

namespace softsense {

namespace {

double clamp_prob(double p) { return std::clamp(p, kProbClip, 1.0 - kProbClip); }

void require_head_layout(const HeadLabels& labels, const Matrix& m, const ClassWeights& weights,
                         const char* what) {
  if (weights.n_heads() != labels.n_heads()) {
    throw ConfigError(std::string(what) + ": " + std::to_string(weights.n_heads()) +
                      " class-weight heads for " + std::to_string(labels.n_heads()) +
                      " label heads");
  }
  if (m.rows() != labels.n_samples() || m.cols() != 2 * labels.n_heads()) {
    throw ShapeError(std::string(what) + ": expected (" + std::to_string(labels.n_samples()) +
                     "x" + std::to_string(2 * labels.n_heads()) + "), got " +
                     m.shape_string());
  }
}

}  // namespace

LossGrad mse_loss(const Matrix& x, const Matrix& x_hat) {
  require_same_shape(x, x_hat, "mse_loss");
  LossGrad out{0.0, Matrix(x.rows(), x.cols())};
  if (x.rows() == 0) return out;
  const double n = static_cast<double>(x.rows());
  const auto a = x.values();
  const auto b = x_hat.values();
  auto g = out.grad.values();
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = b[i] - a[i];
    total += d * d;
    g[i] = 2.0 * d / n;
  }
  out.loss = total / n;
  return out;
}

double binary_ce(int y, double y_hat) {
  const double p = clamp_prob(y_hat);
  return -static_cast<double>(y) * std::log(p) - (1.0 - y) * std::log(1.0 - p);
}

ClassWeights ClassWeights::uniform(std::size_t n_heads, double value) {
  ClassWeights w;
  w.per_head.assign(n_heads, {value, value});
  return w;
}

ClassWeights class_weights(const HeadLabels& labels) {
  if (labels.n_samples() == 0 || labels.n_heads() == 0) {
    throw ConfigError("class_weights: empty label set");
  }
  const double n = static_cast<double>(labels.n_samples());
  const double heads = static_cast<double>(labels.n_heads());
  ClassWeights w;
  w.per_head.resize(labels.n_heads());
  for (std::size_t j = 0; j < labels.n_heads(); ++j) {
    const auto counts = labels.class_counts(j);
    for (std::size_t t = 0; t < 2; ++t) {
      w.per_head[j][t] =
          counts[t] == 0 ? 0.0 : n / (2.0 * heads * static_cast<double>(counts[t]));
    }
  }
  return w;
}

Matrix head_softmax(const Matrix& logits) {
  if (logits.cols() % 2 != 0) {
    throw ShapeError("head_softmax: odd unit count " + logits.shape_string());
  }
  Matrix probs(logits.rows(), logits.cols());
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    for (std::size_t c = 0; c < logits.cols(); c += 2) {
      const double diff = logits(r, c + 1) - logits(r, c);
      probs(r, c + 1) = sigmoid(diff);
      probs(r, c) = sigmoid(-diff);
    }
  }
  return probs;
}

Matrix head_softmax_backward(const Matrix& probs, const Matrix& grad_probs) {
  require_same_shape(probs, grad_probs, "head_softmax_backward");
  Matrix out(probs.rows(), probs.cols());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    for (std::size_t c = 0; c < probs.cols(); c += 2) {
      const double p0 = probs(r, c), p1 = probs(r, c + 1);
      const double g0 = grad_probs(r, c), g1 = grad_probs(r, c + 1);
      const double mean = g0 * p0 + g1 * p1;
      out(r, c) = p0 * (g0 - mean);
      out(r, c + 1) = p1 * (g1 - mean);
    }
  }
  return out;
}

LossGrad multihead_weighted_ce(const HeadLabels& labels, const Matrix& probs,
                               const ClassWeights& weights) {
  require_head_layout(labels, probs, weights, "multihead_weighted_ce");
  LossGrad out{0.0, Matrix(probs.rows(), probs.cols())};
  if (labels.n_samples() == 0) return out;
  const double n = static_cast<double>(labels.n_samples());
  double total = 0.0;
  for (std::size_t j = 0; j < labels.n_heads(); ++j) {
    for (std::size_t i = 0; i < labels.n_samples(); ++i) {
      const Label l = labels(i, j);
      if (l == Label::missing) continue;
      const std::size_t t = l == Label::positive ? 1 : 0;
      const std::size_t col = 2 * j + t;
      const double p = probs(i, col);
      const double w = weights.per_head[j][t];
      total += -std::log(clamp_prob(p)) * w;
      if (p > kProbClip && p < 1.0 - kProbClip) {
        out.grad(i, col) = -w / (n * p);
      }
    }
  }
  out.loss = total / n;
  return out;
}

LogitLoss multihead_weighted_ce_logits(const HeadLabels& labels, const Matrix& logits,
                                       const ClassWeights& weights) {
  require_head_layout(labels, logits, weights, "multihead_weighted_ce_logits");
  LogitLoss out{0.0, Matrix(logits.rows(), logits.cols()), head_softmax(logits)};
  if (labels.n_samples() == 0) return out;
  const double n = static_cast<double>(labels.n_samples());
  double total = 0.0;
  for (std::size_t j = 0; j < labels.n_heads(); ++j) {
    for (std::size_t i = 0; i < labels.n_samples(); ++i) {
      const Label l = labels(i, j);
      if (l == Label::missing) continue;
      const std::size_t t = l == Label::positive ? 1 : 0;
      const double w = weights.per_head[j][t];
      total += -std::log(clamp_prob(out.probs(i, 2 * j + t))) * w;
      for (std::size_t u = 0; u < 2; ++u) {
        const double target = u == t ? 1.0 : 0.0;
        out.grad_logits(i, 2 * j + u) = w * (out.probs(i, 2 * j + u) - target) / n;
      }
    }
  }
  out.loss = total / n;
  return out;
}

double VarianceParams::sigma1_sq() const { return std::exp(log_var_recon); }
double VarianceParams::sigma2_sq() const { return std::exp(log_var_pred); }

CombinedLoss combined_loss_variance(double recon, double pred, const VarianceParams& v) {
  // ln σ = s/2 with s = ln σ².
  const double inv1 = std::exp(-v.log_var_recon);
  const double inv2 = std::exp(-v.log_var_pred);
  CombinedLoss out;
  out.loss = 0.5 * recon * inv1 + pred * inv2 + 0.5 * v.log_var_recon + 0.5 * v.log_var_pred;
  out.d_recon = 0.5 * inv1;
  out.d_pred = inv2;
  out.grad_s1 = -0.5 * recon * inv1 + 0.5;
  out.grad_s2 = -pred * inv2 + 0.5;
  return out;
}

double combined_loss_naive(double recon, double pred, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("naive loss weight lambda must lie in [0, 1], got " +
                      std::to_string(lambda));
  }
  return lambda * recon + (1.0 - lambda) * pred;
}

}  // namespace softsense
