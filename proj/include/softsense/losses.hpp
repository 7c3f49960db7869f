#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "softsense/labels.hpp"
#include "softsense/matrix.hpp"

namespace softsense {

/// Probabilities are clamped to [kProbClip, 1 - kProbClip] before any log.
inline constexpr double kProbClip = 1e-12;

struct LossGrad {
  double loss = 0.0;
  Matrix grad;
};

/// Reconstruction loss (1/N)·Σ_rows ‖x − x̂‖², gradient w.r.t. x̂.
LossGrad mse_loss(const Matrix& x, const Matrix& x_hat);

/// −y·ln ŷ − (1−y)·ln(1−ŷ) with ŷ clamped.
double binary_ce(int y, double y_hat);

/// Per-head class weights {w_j^0, w_j^1}.
struct ClassWeights {
  std::vector<std::array<double, 2>> per_head;

  std::size_t n_heads() const noexcept { return per_head.size(); }
  static ClassWeights uniform(std::size_t n_heads, double value = 1.0);
};

/// w_j^t = N / (2·N_h·n_j^t); a class with no samples gets weight 0.
ClassWeights class_weights(const HeadLabels& labels);

/// Pairwise two-way softmax over columns (2j, 2j+1).
Matrix head_softmax(const Matrix& logits);

/// Chain rule through head_softmax: grad_logits from grad_probs.
Matrix head_softmax_backward(const Matrix& probs, const Matrix& grad_probs);

/// Multi-head weighted cross-entropy on per-head probability pairs:
/// J_y = (1/N) Σ_j Σ_{i observed at j} [−y⁰ ln ŷ⁰ w_j⁰ − y¹ ln ŷ¹ w_j¹].
/// Returns J_y and its gradient w.r.t. the probabilities (zero where masked or
/// clamped).
LossGrad multihead_weighted_ce(const HeadLabels& labels, const Matrix& probs,
                               const ClassWeights& weights);

struct LogitLoss {
  double loss = 0.0;
  Matrix grad_logits;
  Matrix probs;
};

/// Same loss evaluated from pre-softmax logits, with the fused gradient
/// (1/N)·w_j^t·(ŷ − y) w.r.t. the logits.
LogitLoss multihead_weighted_ce_logits(const HeadLabels& labels, const Matrix& logits,
                                       const ClassWeights& weights);

/// Trainable task variances stored as log-variances s = ln σ².
struct VarianceParams {
  double log_var_recon = 0.0;  // s1
  double log_var_pred = 0.0;   // s2

  double sigma1_sq() const;
  double sigma2_sq() const;

  friend bool operator==(const VarianceParams&, const VarianceParams&) = default;
};

struct CombinedLoss {
  double loss = 0.0;
  double d_recon = 0.0;     // ∂J/∂J_x
  double d_pred = 0.0;      // ∂J/∂J_y
  double grad_s1 = 0.0;
  double grad_s2 = 0.0;
};

/// J = J_x/(2σ₁²) + J_y/σ₂² + ln σ₁ + ln σ₂.
CombinedLoss combined_loss_variance(double recon, double pred, const VarianceParams& v);

/// J = λ·J_x + (1−λ)·J_y. Throws ConfigError for λ outside [0, 1].
double combined_loss_naive(double recon, double pred, double lambda);

}  // namespace softsense
