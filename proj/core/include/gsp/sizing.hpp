#pragma once

#include <vector>

namespace gsp {

/// How the steady-state deviation limit entering the capacity bound is
/// interpreted. RadPerSec is the canonical convention (limit = 2*pi*df);
/// Hz plugs the raw Hz deviation into the same formula.
enum class DeviationUnits { RadPerSec, Hz };

struct SizingSpec {
  double p_trans_w = 0.0;           // post-event constant loss, >= 0
  double delta_omega_ss_max = 0.0;  // allowed deviation, > 0 (units per above)
  std::vector<double> generator_inv_dampings_ws;  // 1/D_G,i
};

struct SizingResult {
  double total_inv_damping_ws = 0.0;
  double per_unit_inv_damping_ws = 0.0;
  int n_s = 0;
  bool feasible = true;
};

/// Minimum total storage capacity sum(1/D_S) keeping the steady-state
/// deviation within the limit: max(0, 3 P_trans / dw_max - sum(1/D_G)).
double total_storage_bound(const SizingSpec& spec);

/// Equal split of the total capacity over n_s units.
SizingResult split_capacity(double total_ws, int n_s);

}  // namespace gsp
