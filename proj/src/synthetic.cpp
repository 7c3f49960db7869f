#include "softsense/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace softsense {

double SyntheticSpec::observation_rate(std::size_t head) const {
  return observation_rates.size() == 1 ? observation_rates.front() : observation_rates.at(head);
}

void SyntheticSpec::validate() const {
  if (n_samples == 0 || n_features == 0 || latent_rank == 0) {
    throw ConfigError("synthetic spec: sample, feature and rank counts must be positive");
  }
  if (latent_rank > n_features) {
    throw ConfigError("synthetic spec: latent_rank " + std::to_string(latent_rank) +
                      " exceeds n_features " + std::to_string(n_features));
  }
  if (imbalance_ratios.empty()) {
    throw ConfigError("synthetic spec: at least one head is required");
  }
  for (const double r : imbalance_ratios) {
    if (!(r >= 1.0)) throw ConfigError("synthetic spec: imbalance ratios must be >= 1");
  }
  if (observation_rates.size() != 1 && observation_rates.size() != imbalance_ratios.size()) {
    throw ConfigError("synthetic spec: give one observation rate or one per head");
  }
  for (const double r : observation_rates) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw ConfigError("synthetic spec: observation rates must lie in (0, 1]");
    }
  }
  if (!(label_noise >= 0.0 && label_noise < 0.5)) {
    throw ConfigError("synthetic spec: label_noise must lie in [0, 0.5)");
  }
  if (!(feature_noise >= 0.0) || !(nonlinearity >= 0.0)) {
    throw ConfigError("synthetic spec: feature_noise and nonlinearity must be non-negative");
  }
}

std::size_t synthetic_positive_count(std::size_t n_samples, double ratio) {
  return static_cast<std::size_t>(std::llround(static_cast<double>(n_samples) / (1.0 + ratio)));
}

Dataset generate_synthetic(const SyntheticSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t n = spec.n_samples;
  const std::size_t r = spec.latent_rank;
  const std::size_t p = spec.n_features;
  const std::size_t heads = spec.n_heads();
  for (std::size_t j = 0; j < heads; ++j) {
    if (synthetic_positive_count(n, spec.imbalance_ratios[j]) < 2) {
      throw ConfigError("synthetic spec: imbalance ratio " +
                        std::to_string(spec.imbalance_ratios[j]) + " leaves fewer than 2 " +
                        "minority samples out of " + std::to_string(n));
    }
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(r));
  Matrix latent(n, r);
  for (double& v : latent.values()) v = rng.normal();
  Matrix loading(r, p);
  for (double& v : loading.values()) v = rng.normal() * scale;

  Dataset ds;
  ds.features = matmul(latent, loading);
  for (double& v : ds.features.values()) v += spec.feature_noise * rng.normal();
  for (std::size_t c = 0; c < p; ++c) ds.feature_names.push_back("x" + std::to_string(c + 1));
  for (std::size_t j = 0; j < heads; ++j) ds.head_names.push_back("Y" + std::to_string(j + 1));

  ds.labels = HeadLabels(n, heads, Label::negative);
  std::vector<double> score(n);
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < heads; ++j) {
    std::vector<double> linear(r);
    for (double& v : linear) v = rng.normal() * scale;
    Matrix quad(r, r);
    for (std::size_t a = 0; a < r; ++a) {
      for (std::size_t b = a; b < r; ++b) {
        quad(a, b) = quad(b, a) = rng.normal() * scale;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto h = latent.row(i);
      double q = 0.0;
      for (std::size_t a = 0; a < r; ++a) q += h[a] * dot(quad.row(a), h);
      score[i] = dot(linear, h) + spec.nonlinearity * q;
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    const std::size_t positives = synthetic_positive_count(n, spec.imbalance_ratios[j]);
    for (std::size_t k = 0; k < positives; ++k) ds.labels(order[k], j) = Label::positive;
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < heads; ++j) {
      if (rng.bernoulli(spec.label_noise)) {
        ds.labels(i, j) =
            ds.labels(i, j) == Label::positive ? Label::negative : Label::positive;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    std::vector<bool> keep(heads);
    for (std::size_t j = 0; j < heads; ++j) {
      keep[j] = rng.bernoulli(spec.observation_rate(j));
      any = any || keep[j];
    }
    if (!any) keep[rng.uniform_index(heads)] = true;
    for (std::size_t j = 0; j < heads; ++j) {
      if (!keep[j]) ds.labels(i, j) = Label::missing;
    }
  }
  return ds;
}

}  // namespace softsense
