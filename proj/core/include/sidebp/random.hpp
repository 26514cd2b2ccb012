#pragma once

// Seeding and small sampling helpers shared by every Monte Carlo path.
//
// All randomness is derived from a single 64-bit base seed. Independent
// streams (per trial, per block of trials, per graph) are obtained with
// derive_seed(), a splitmix64 counter scheme, so results do not depend on
// how work is split across threads.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sidebp {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the `stream`-th child of `base`.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

/// Uniform double in [0, 1) built from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Index drawn from a finite distribution given by `probs` (need not be
/// normalized exactly; the last positive entry absorbs rounding).
inline std::size_t sample_categorical(std::span<const double> probs, Rng& rng) {
  double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    last_positive = k;
    acc += probs[k];
    if (u < acc) return k;
  }
  return last_positive;
}

/// O(1) Poisson sampler for a fixed mean (Walker alias table over the
/// support [lo, hi] where the truncated tail mass is below 1e-20).
/// Used on hot paths where the same rate is drawn millions of times.
class PoissonTable {
 public:
  PoissonTable() = default;
  explicit PoissonTable(double mean);

  double mean() const noexcept { return mean_; }

  /// One generator call: the high 32 bits pick the column, the low 32 bits
  /// decide between the column and its alias.
  std::uint64_t operator()(Rng& rng) const {
    if (threshold_.empty()) return 0;
    const std::uint64_t u = rng();
    const auto column = static_cast<std::size_t>(((u >> 32) * threshold_.size()) >> 32);
    return lo_ + ((u & 0xffffffffu) < threshold_[column] ? column : alias_[column]);
  }

  /// Support [lo, hi] of the table.
  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return lo_ + threshold_.size() - (threshold_.empty() ? 0 : 1); }

 private:
  double mean_ = 0.0;
  std::uint64_t lo_ = 0;
  std::vector<std::uint64_t> threshold_;  // acceptance probability * 2^32
  std::vector<std::uint32_t> alias_;
};

}  // namespace sidebp
