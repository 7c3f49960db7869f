#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "softsense/matrix.hpp"

namespace softsense {

enum class Label : std::int8_t { missing = -1, negative = 0, positive = 1 };

/// Per-sample, per-head ternary labels. A head is one measurement step; a
/// sample is usually observed at only some of them.
class HeadLabels {
 public:
  HeadLabels() = default;
  HeadLabels(std::size_t n_samples, std::size_t n_heads, Label fill = Label::missing);

  std::size_t n_samples() const noexcept { return n_samples_; }
  std::size_t n_heads() const noexcept { return n_heads_; }

  Label operator()(std::size_t sample, std::size_t head) const {
    return values_[sample * n_heads_ + head];
  }
  Label& operator()(std::size_t sample, std::size_t head) {
    return values_[sample * n_heads_ + head];
  }
  bool observed(std::size_t sample, std::size_t head) const {
    return (*this)(sample, head) != Label::missing;
  }

  /// n_j: non-missing entries of column `head`.
  std::size_t observed_count(std::size_t head) const;
  /// {n_j^0, n_j^1}.
  std::array<std::size_t, 2> class_counts(std::size_t head) const;

  /// Throws DataError if some sample has no observed head.
  void require_each_sample_observed() const;

  HeadLabels gather_rows(std::span<const std::size_t> indices) const;
  void append(const HeadLabels& other);

  friend bool operator==(const HeadLabels&, const HeadLabels&) = default;

 private:
  std::size_t n_samples_ = 0;
  std::size_t n_heads_ = 0;
  std::vector<Label> values_;
};

/// Two-unit target encoding: head j owns columns (2j, 2j+1) holding (y^0, y^1).
/// Missing entries are zero in both the targets and the mask.
struct HeadTargets {
  Matrix targets;  // n × 2·heads
  Matrix mask;     // n × 2·heads, 1 where the head is observed
};

HeadTargets encode_head_targets(const HeadLabels& labels);

}  // namespace softsense
