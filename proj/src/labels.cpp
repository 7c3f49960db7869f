#include "softsense/labels.hpp"

#include <string>

#include "softsense/errors.hpp"

namespace softsense {

HeadLabels::HeadLabels(std::size_t n_samples, std::size_t n_heads, Label fill)
    : n_samples_(n_samples), n_heads_(n_heads), values_(n_samples * n_heads, fill) {}

std::size_t HeadLabels::observed_count(std::size_t head) const {
  const auto counts = class_counts(head);
  return counts[0] + counts[1];
}

std::array<std::size_t, 2> HeadLabels::class_counts(std::size_t head) const {
  if (head >= n_heads_) {
    throw ShapeError("head index " + std::to_string(head) + " out of range (" +
                     std::to_string(n_heads_) + " heads)");
  }
  std::array<std::size_t, 2> counts{0, 0};
  for (std::size_t i = 0; i < n_samples_; ++i) {
    const Label l = (*this)(i, head);
    if (l == Label::negative) ++counts[0];
    if (l == Label::positive) ++counts[1];
  }
  return counts;
}

void HeadLabels::require_each_sample_observed() const {
  for (std::size_t i = 0; i < n_samples_; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < n_heads_ && !any; ++j) any = observed(i, j);
    if (!any) {
      throw DataError("sample " + std::to_string(i) + " has no observed head");
    }
  }
}

HeadLabels HeadLabels::gather_rows(std::span<const std::size_t> indices) const {
  HeadLabels out(indices.size(), n_heads_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= n_samples_) {
      throw ShapeError("label row index " + std::to_string(indices[i]) + " out of range");
    }
    for (std::size_t j = 0; j < n_heads_; ++j) out(i, j) = (*this)(indices[i], j);
  }
  return out;
}

void HeadLabels::append(const HeadLabels& other) {
  if (n_samples_ == 0 && n_heads_ == 0) {
    *this = other;
    return;
  }
  if (other.n_heads_ != n_heads_) {
    throw ShapeError("cannot append labels with " + std::to_string(other.n_heads_) +
                     " heads to labels with " + std::to_string(n_heads_));
  }
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
  n_samples_ += other.n_samples_;
}

HeadTargets encode_head_targets(const HeadLabels& labels) {
  HeadTargets out{Matrix(labels.n_samples(), 2 * labels.n_heads()),
                  Matrix(labels.n_samples(), 2 * labels.n_heads())};
  for (std::size_t i = 0; i < labels.n_samples(); ++i) {
    for (std::size_t j = 0; j < labels.n_heads(); ++j) {
      const Label l = labels(i, j);
      if (l == Label::missing) continue;
      const double y1 = l == Label::positive ? 1.0 : 0.0;
      out.targets(i, 2 * j) = 1.0 - y1;
      out.targets(i, 2 * j + 1) = y1;
      out.mask(i, 2 * j) = 1.0;
      out.mask(i, 2 * j + 1) = 1.0;
    }
  }
  return out;
}

}  // namespace softsense
