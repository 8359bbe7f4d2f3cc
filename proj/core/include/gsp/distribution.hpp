#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace gsp {

/// A multiset placement of identical storage units on buses: counts[i] units
/// at bus i+1. The canonical representation is the dense counts vector, so
/// lexicographic comparison and serialization are well defined.
struct Distribution {
  std::vector<int> counts;

  Distribution() = default;
  explicit Distribution(int n_buses) : counts(n_buses, 0) {}

  int total_units() const;
  bool empty() const { return total_units() == 0; }

  /// Compact human/file form, e.g. "7x2-10x3"; "none" for the empty placement.
  std::string slug() const;

  bool operator==(const Distribution&) const = default;
  auto operator<=>(const Distribution& other) const {
    return counts <=> other.counts;
  }
};

/// Number of multisets C(n + n_units - 1, n_units), with checked arithmetic.
/// Throws ConfigError on overflow of 64-bit math.
std::uint64_t distribution_count(int n_buses, int n_units);

/// Streams all placements of n_units on n_buses in ascending lexicographic
/// order of the counts vector, each exactly once.
class DistributionEnumerator {
public:
  DistributionEnumerator(int n_buses, int n_units);

  /// Writes the next placement into out; returns false when exhausted.
  bool next(Distribution& out);

private:
  std::vector<int> counts_;
  bool first_ = true;
  bool done_ = false;
};

}  // namespace gsp
