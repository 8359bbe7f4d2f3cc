#include "gsp/distribution.hpp"

#include <numeric>

#include "gsp/errors.hpp"

namespace gsp {

int Distribution::total_units() const {
  return std::accumulate(counts.begin(), counts.end(), 0);
}

std::string Distribution::slug() const {
  std::string out;
  for (int i = 0; i < static_cast<int>(counts.size()); ++i) {
    if (counts[i] == 0) continue;
    if (!out.empty()) out += '-';
    out += std::to_string(i + 1) + "x" + std::to_string(counts[i]);
  }
  return out.empty() ? "none" : out;
}

std::uint64_t distribution_count(int n_buses, int n_units) {
  if (n_buses < 1 || n_units < 0)
    throw ConfigError("distribution_count needs n_buses >= 1, n_units >= 0");
  // C(n + k - 1, k), multiplicative form with overflow checks.
  const std::uint64_t n = static_cast<std::uint64_t>(n_buses) + n_units - 1;
  const std::uint64_t k =
      std::min<std::uint64_t>(n_units, n - n_units);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n - k + i;
    if (result > UINT64_MAX / factor)
      throw ConfigError("solution-space size overflows 64-bit arithmetic");
    result = result * factor / i;  // exact: result*factor divisible by i here
  }
  return result;
}

DistributionEnumerator::DistributionEnumerator(int n_buses, int n_units) {
  if (n_buses < 1 || n_units < 0)
    throw ConfigError("enumeration needs n_buses >= 1, n_units >= 0");
  counts_.assign(n_buses, 0);
  counts_.back() = n_units;
}

bool DistributionEnumerator::next(Distribution& out) {
  if (done_) return false;
  if (first_) {
    first_ = false;
    out.counts = counts_;
    return true;
  }
  // Successor in ascending lexicographic order: move one unit from the
  // suffix into the rightmost position that still has mass to its right,
  // then park the remainder in the last slot.
  const int n = static_cast<int>(counts_.size());
  int i = n - 2;
  int suffix = n >= 2 ? counts_[n - 1] : 0;
  while (i >= 0 && suffix == 0) {
    --i;
    if (i >= 0) suffix += counts_[i + 1];
  }
  if (i < 0) {
    done_ = true;
    return false;
  }
  ++counts_[i];
  for (int j = i + 1; j < n; ++j) counts_[j] = 0;
  counts_[n - 1] = suffix - 1;
  out.counts = counts_;
  return true;
}

}  // namespace gsp
