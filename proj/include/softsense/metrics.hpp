#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "softsense/labels.hpp"

namespace softsense {

/// Confusion counts of one head over its observed samples; positive = class 1.
struct HeadConfusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t support() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const HeadConfusion&, const HeadConfusion&) = default;
};

struct ConfusionCounts {
  std::vector<HeadConfusion> per_head;
};

/// Missing labels are skipped; predictions must cover every (sample, head).
ConfusionCounts confusion(const HeadLabels& labels, const HeadLabels& predictions);

/// nullopt marks an undefined rate (zero denominator).
struct RecallPrecision {
  std::optional<double> recall;
  std::optional<double> precision;
};

RecallPrecision recall_precision(const HeadConfusion& counts);
std::vector<RecallPrecision> recall_precision(const ConfusionCounts& counts);

/// (1+β²)·P·R / (β²·P + R), defined as 0 when P = R = 0.
double f_beta(double precision, double recall, double beta);

/// max |C_i| / min |C_i| over the nonempty classes. Throws DataError when
/// every class is empty.
double imbalance_ratio(std::span<const std::size_t> class_sizes);

struct BetaPolicy {
  enum class Kind { per_head_imbalance_ratio, fixed };
  Kind kind = Kind::per_head_imbalance_ratio;
  double fixed_beta = 1.0;
  /// {n^0, n^1} per head from the training split; used by the imbalance-ratio policy.
  std::vector<std::array<std::size_t, 2>> train_class_sizes;

  static BetaPolicy from_training(const HeadLabels& train_labels);
  static BetaPolicy fixed(double beta);
};

struct HeadMetrics {
  std::string name;
  HeadConfusion counts;
  std::optional<double> recall;
  std::optional<double> precision;
  std::optional<double> f_beta;
  std::optional<double> beta;
};

struct MetricsReport {
  std::vector<HeadMetrics> heads;
  std::optional<double> macro_recall;
  std::optional<double> macro_precision;
  std::optional<double> macro_f_beta;
  std::size_t recall_skipped = 0;
  std::size_t precision_skipped = 0;
  std::size_t f_beta_skipped = 0;
};

/// Per-head recall, precision and F_β plus macro averages that skip undefined
/// heads. Head names default to Y1..Yk.
MetricsReport evaluate(const HeadLabels& predictions, const HeadLabels& labels,
                       const BetaPolicy& policy, const std::vector<std::string>& head_names = {});

}  // namespace softsense
