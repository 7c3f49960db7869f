#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "softsense/dataset.hpp"
#include "softsense/rng.hpp"

namespace softsense {

/// Desk-scale stand-in for a wafer line: low-rank sensor features and
/// partially observed, imbalanced pass/fail heads.
struct SyntheticSpec {
  std::size_t n_samples = 5000;
  std::size_t n_features = 64;
  std::size_t latent_rank = 8;
  /// One entry per head: majority/minority class size ratio (≥ 1).
  std::vector<double> imbalance_ratios{2.0, 9.0, 50.0, 225.0};
  /// One entry per head, in (0, 1]. A single entry applies to every head.
  std::vector<double> observation_rates{0.6};
  double label_noise = 0.02;
  /// Standard deviation of the isotropic noise added to H·A.
  double feature_noise = 0.1;
  /// Weight of the quadratic term in each head's score (the linear term has weight 1).
  double nonlinearity = 0.5;
  std::uint64_t seed = 42;

  std::size_t n_heads() const noexcept { return imbalance_ratios.size(); }
  double observation_rate(std::size_t head) const;
  /// Throws ConfigError on an invalid spec.
  void validate() const;
};

/// features = H·A + noise with H (n×rank) and A (rank×features) Gaussian. Head
/// j is positive for the top n/(1+ratio_j) samples by a head-specific random
/// quadratic score of H; labels then flip with probability label_noise and each
/// (sample, head) is kept with probability observation_rate. A sample left with
/// no observed head gets one head, chosen uniformly, observed.
Dataset generate_synthetic(const SyntheticSpec& spec, Rng& rng);

/// Positive count implied by the quantile construction, round(n/(1+ratio)).
std::size_t synthetic_positive_count(std::size_t n_samples, double ratio);

}  // namespace softsense
