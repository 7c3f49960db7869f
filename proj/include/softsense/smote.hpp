#pragma once

#include <cstddef>
#include <vector>

#include "softsense/labels.hpp"
#include "softsense/matrix.hpp"
#include "softsense/rng.hpp"

namespace softsense {

inline constexpr std::size_t kDefaultSmoteNeighbors = 5;

/// Where a synthetic row came from: row = x[base] + gap·(x[neighbor] − x[base]).
struct SmoteOrigin {
  std::size_t base = 0;      // row index into the input features
  std::size_t neighbor = 0;  // row index into the input features
  double gap = 0.0;          // in [0, 1)
};

struct SmoteResult {
  Matrix samples;
  std::vector<SmoteOrigin> origins;
};

/// Synthesizes `target_count` rows by interpolating between a random minority
/// row and one of its k Euclidean-nearest minority neighbours. k is capped at
/// (minority count − 1). Majority rows are never read.
SmoteResult smote_oversample(const Matrix& features, const std::vector<bool>& minority_mask,
                             std::size_t k, std::size_t target_count, Rng& rng);

struct OversampledRows {
  Matrix features;
  HeadLabels labels;
};

/// Per-head SMOTE to class parity. Returns the original rows followed by the
/// synthetic ones. For each head the minority class of its
/// observed subset is oversampled; every synthetic row carries a label for
/// that head only. Heads with fewer than two minority samples are skipped.
OversampledRows smote_balance_heads(const Matrix& features, const HeadLabels& labels,
                                    std::size_t k, Rng& rng);

}  // namespace softsense
