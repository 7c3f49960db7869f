#include "softsense/smote.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "softsense/errors.hpp"

namespace softsense {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

SmoteResult smote_oversample(const Matrix& features, const std::vector<bool>& minority_mask,
                             std::size_t k, std::size_t target_count, Rng& rng) {
  if (minority_mask.size() != features.rows()) {
    throw ShapeError("smote_oversample: mask length " + std::to_string(minority_mask.size()) +
                     " for " + features.shape_string() + " features");
  }
  if (k == 0) {
    throw ConfigError("smote_oversample: k must be at least 1");
  }
  SmoteResult out{Matrix(0, features.cols()), {}};
  if (target_count == 0) return out;

  std::vector<std::size_t> minority;
  for (std::size_t i = 0; i < minority_mask.size(); ++i) {
    if (minority_mask[i]) minority.push_back(i);
  }
  if (minority.size() < 2) {
    throw InsufficientDataError("smote_oversample: need at least 2 minority samples, have " +
                                std::to_string(minority.size()));
  }
  const std::size_t k_eff = std::min(k, minority.size() - 1);

  // neighbours[a] lists positions (into `minority`) of the k_eff nearest rows,
  // ties broken by position.
  std::vector<std::vector<std::size_t>> neighbours(minority.size());
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t a = 0; a < minority.size(); ++a) {
    dist.clear();
    const auto xa = features.row(minority[a]);
    for (std::size_t b = 0; b < minority.size(); ++b) {
      if (b == a) continue;
      dist.emplace_back(squared_distance(xa, features.row(minority[b])), b);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_eff),
                      dist.end());
    neighbours[a].reserve(k_eff);
    for (std::size_t n = 0; n < k_eff; ++n) neighbours[a].push_back(dist[n].second);
  }

  std::vector<double> data;
  data.reserve(target_count * features.cols());
  out.origins.reserve(target_count);
  for (std::size_t s = 0; s < target_count; ++s) {
    const std::size_t a = rng.uniform_index(minority.size());
    const std::size_t b = neighbours[a][rng.uniform_index(k_eff)];
    const double gap = rng.uniform();
    const auto xa = features.row(minority[a]);
    const auto xb = features.row(minority[b]);
    for (std::size_t c = 0; c < xa.size(); ++c) {
      data.push_back(xa[c] + gap * (xb[c] - xa[c]));
    }
    out.origins.push_back({minority[a], minority[b], gap});
  }
  out.samples = Matrix(target_count, features.cols(), std::move(data));
  return out;
}

OversampledRows smote_balance_heads(const Matrix& features, const HeadLabels& labels,
                                    std::size_t k, Rng& rng) {
  if (labels.n_samples() != features.rows()) {
    throw ShapeError("smote_balance_heads: " + std::to_string(labels.n_samples()) +
                     " label rows for " + features.shape_string() + " features");
  }
  OversampledRows out{features, labels};
  for (std::size_t j = 0; j < labels.n_heads(); ++j) {
    const auto counts = labels.class_counts(j);
    if (counts[0] == counts[1]) continue;
    const Label minority_label = counts[1] < counts[0] ? Label::positive : Label::negative;
    const std::size_t minority = std::min(counts[0], counts[1]);
    const std::size_t majority = std::max(counts[0], counts[1]);
    if (minority < 2) continue;
    std::vector<bool> mask(features.rows(), false);
    for (std::size_t i = 0; i < features.rows(); ++i) mask[i] = labels(i, j) == minority_label;
    SmoteResult synth = smote_oversample(features, mask, k, majority - minority, rng);
    HeadLabels synth_labels(synth.samples.rows(), labels.n_heads());
    for (std::size_t i = 0; i < synth.samples.rows(); ++i) synth_labels(i, j) = minority_label;
    out.features = vconcat(out.features, synth.samples);
    out.labels.append(synth_labels);
  }
  return out;
}

}  // namespace softsense
