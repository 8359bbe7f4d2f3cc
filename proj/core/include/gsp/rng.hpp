#pragma once

#include <cstdint>
#include <span>

namespace gsp {

/// Counter-based generator built on the SplitMix64 finalizer.
///
/// Output k of substream (a, b) under a given seed is
/// mix(key(seed, a, b) + k * GOLDEN), so any (iteration, sample-index)
/// substream can be opened independently of evaluation order. This is what
/// keeps parallel search runs byte-identical to serial ones.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream_a = 0,
                      std::uint64_t stream_b = 0)
      : key_(mix(mix(seed + GOLDEN * stream_a) ^ mix(stream_b + GOLDEN))) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * GOLDEN); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// One categorical draw from an (unnormalized nonnegative) weight vector.
  /// Returns the index of the selected cell.
  int categorical(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double u = uniform() * total;
    double acc = 0.0;
    int last_positive = 0;
    for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
      if (weights[i] <= 0.0) continue;
      last_positive = i;
      acc += weights[i];
      if (u < acc) return i;
    }
    return last_positive;  // u landed on the rounding tail
  }

private:
  static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace gsp
