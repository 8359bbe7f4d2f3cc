#include "gsp/sizing.hpp"

#include <algorithm>

#include "gsp/errors.hpp"

namespace gsp {

double total_storage_bound(const SizingSpec& spec) {
  if (spec.p_trans_w < 0) throw ConfigError("P_trans must be nonnegative");
  if (spec.delta_omega_ss_max <= 0)
    throw ConfigError("steady-state deviation limit must be positive");
  double sum_gen = 0.0;
  for (double inv_d : spec.generator_inv_dampings_ws) {
    if (inv_d <= 0) throw ConfigError("generator dampings must be positive");
    sum_gen += inv_d;
  }
  const double bound = 3.0 * spec.p_trans_w / spec.delta_omega_ss_max - sum_gen;
  return std::max(0.0, bound);
}

SizingResult split_capacity(double total_ws, int n_s) {
  if (total_ws < 0) throw ConfigError("total capacity must be nonnegative");
  if (n_s < 1) {
    // A positive bound with no units to carry it is infeasible, reported
    // rather than thrown so `validate` can surface it as a finding.
    return {total_ws, 0.0, 0, total_ws == 0.0};
  }
  SizingResult result;
  result.total_inv_damping_ws = total_ws;
  result.n_s = n_s;
  result.per_unit_inv_damping_ws = total_ws / n_s;
  result.feasible = true;
  return result;
}

}  // namespace gsp
