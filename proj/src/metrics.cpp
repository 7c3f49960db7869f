#include "softsense/metrics.hpp"

#include <algorithm>
#include <limits>

#include "softsense/errors.hpp"

namespace softsense {

ConfusionCounts confusion(const HeadLabels& labels, const HeadLabels& predictions) {
  if (labels.n_samples() != predictions.n_samples() ||
      labels.n_heads() != predictions.n_heads()) {
    throw ShapeError("confusion: labels (" + std::to_string(labels.n_samples()) + "x" +
                     std::to_string(labels.n_heads()) + ") vs predictions (" +
                     std::to_string(predictions.n_samples()) + "x" +
                     std::to_string(predictions.n_heads()) + ")");
  }
  ConfusionCounts out;
  out.per_head.resize(labels.n_heads());
  for (std::size_t i = 0; i < labels.n_samples(); ++i) {
    for (std::size_t j = 0; j < labels.n_heads(); ++j) {
      const Label truth = labels(i, j);
      if (truth == Label::missing) continue;
      const Label pred = predictions(i, j);
      if (pred == Label::missing) {
        throw DataError("confusion: prediction missing for sample " + std::to_string(i) +
                        ", head " + std::to_string(j));
      }
      HeadConfusion& c = out.per_head[j];
      if (truth == Label::positive) {
        ++(pred == Label::positive ? c.tp : c.fn);
      } else {
        ++(pred == Label::positive ? c.fp : c.tn);
      }
    }
  }
  return out;
}

RecallPrecision recall_precision(const HeadConfusion& c) {
  RecallPrecision out;
  if (c.tp + c.fn > 0) out.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (c.tp + c.fp > 0) {
    out.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  }
  return out;
}

std::vector<RecallPrecision> recall_precision(const ConfusionCounts& counts) {
  std::vector<RecallPrecision> out;
  out.reserve(counts.per_head.size());
  for (const auto& c : counts.per_head) out.push_back(recall_precision(c));
  return out;
}

double f_beta(double precision, double recall, double beta) {
  if (precision == 0.0 && recall == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

double imbalance_ratio(std::span<const std::size_t> class_sizes) {
  std::size_t lo = std::numeric_limits<std::size_t>::max();
  std::size_t hi = 0;
  for (const std::size_t s : class_sizes) {
    if (s == 0) continue;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (hi == 0) {
    throw DataError("imbalance_ratio: every class is empty");
  }
  return static_cast<double>(hi) / static_cast<double>(lo);
}

BetaPolicy BetaPolicy::from_training(const HeadLabels& train_labels) {
  BetaPolicy p;
  for (std::size_t j = 0; j < train_labels.n_heads(); ++j) {
    p.train_class_sizes.push_back(train_labels.class_counts(j));
  }
  return p;
}

BetaPolicy BetaPolicy::fixed(double beta) {
  BetaPolicy p;
  p.kind = Kind::fixed;
  p.fixed_beta = beta;
  return p;
}

MetricsReport evaluate(const HeadLabels& predictions, const HeadLabels& labels,
                       const BetaPolicy& policy, const std::vector<std::string>& head_names) {
  const ConfusionCounts counts = confusion(labels, predictions);
  if (!head_names.empty() && head_names.size() != labels.n_heads()) {
    throw ShapeError("evaluate: " + std::to_string(head_names.size()) + " head names for " +
                     std::to_string(labels.n_heads()) + " heads");
  }
  if (policy.kind == BetaPolicy::Kind::per_head_imbalance_ratio &&
      policy.train_class_sizes.size() != labels.n_heads()) {
    throw ShapeError("evaluate: training class sizes cover " +
                     std::to_string(policy.train_class_sizes.size()) + " heads, labels have " +
                     std::to_string(labels.n_heads()));
  }

  MetricsReport report;
  double recall_sum = 0.0, precision_sum = 0.0, f_sum = 0.0;
  std::size_t recall_n = 0, precision_n = 0, f_n = 0;
  for (std::size_t j = 0; j < labels.n_heads(); ++j) {
    HeadMetrics m;
    m.name = head_names.empty() ? "Y" + std::to_string(j + 1) : head_names[j];
    m.counts = counts.per_head[j];
    const RecallPrecision rp = recall_precision(m.counts);
    m.recall = rp.recall;
    m.precision = rp.precision;
    if (policy.kind == BetaPolicy::Kind::fixed) {
      m.beta = policy.fixed_beta;
    } else {
      const auto& sizes = policy.train_class_sizes[j];
      if (sizes[0] + sizes[1] > 0) m.beta = imbalance_ratio(sizes);
    }
    if (m.recall && m.precision && m.beta) m.f_beta = f_beta(*m.precision, *m.recall, *m.beta);

    if (m.recall) {
      recall_sum += *m.recall;
      ++recall_n;
    } else {
      ++report.recall_skipped;
    }
    if (m.precision) {
      precision_sum += *m.precision;
      ++precision_n;
    } else {
      ++report.precision_skipped;
    }
    if (m.f_beta) {
      f_sum += *m.f_beta;
      ++f_n;
    } else {
      ++report.f_beta_skipped;
    }
    report.heads.push_back(std::move(m));
  }
  if (recall_n > 0) report.macro_recall = recall_sum / static_cast<double>(recall_n);
  if (precision_n > 0) report.macro_precision = precision_sum / static_cast<double>(precision_n);
  if (f_n > 0) report.macro_f_beta = f_sum / static_cast<double>(f_n);
  return report;
}

}  // namespace softsense
