#pragma once

#include <cstdint>
#include <random>

namespace softsense {

/// Seeded random source. Draws are bit-identical across platforms: the engine
/// is std::mt19937_64 (fully specified by the standard) and every distribution
/// transform is implemented here rather than taken from <random>.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);
  /// Standard normal via Box-Muller; the spare deviate is cached.
  double normal();
  bool bernoulli(double p);

  /// Child generator seeded from the next parent draw.
  Rng split();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer, used to derive independent seeds from (seed, tag).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace softsense
