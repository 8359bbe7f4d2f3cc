#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gsp/distribution.hpp"
#include "gsp/grid.hpp"
#include "gsp/network.hpp"

namespace gsp {

/// Per-unit storage inverter parameters. inv_damping_ws is the capacity
/// measure 1/D_S of one unit; co-located units aggregate by summing it.
struct StorageParams {
  double inv_damping_ws = 0.0;  // 1/D_S of a single unit [W s]
  double filter_alpha_s = 0.1;  // low-pass smoothing factor [s]
  double charge_eff = 1.0;
  double discharge_eff = 1.0;
};

/// Assembled linear time-invariant system
///   x' = A x + B [P_ref; P_L] + affine,  x = [delta; omega; E_S]
/// with delta the n_g+n_s-1 angles relative to generator 1, omega the
/// n_g+n_s frequencies and E_S the stored energies. Immutable once built.
struct SystemMatrices {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;        // inputs in watts
  Eigen::VectorXd affine;   // constant omega0 forcing
  Eigen::MatrixXd g_w;      // watts/rad coupling, (n_g+n_s) x (n_g+n_s-1)
  Eigen::MatrixXd h_w;      // dimensionless load coupling, (n_g+n_s) x n_l
  Eigen::VectorXd p_ref_w;  // generator dispatch, storage entries zero
  std::vector<double> coi_weights;   // J_i / J_tot over generators
  std::vector<int> storage_host_bus; // per storage node
  double omega0 = 0.0;
  int n_g = 0, n_s = 0, n_l = 0;

  int angle_dim() const { return n_g + n_s - 1; }
  int freq_dim() const { return n_g + n_s; }
  int state_dim() const { return angle_dim() + freq_dim() + n_s; }

  /// Steady state consistent with the given load injections (watts, ordered
  /// like GridModel::load_bus_ids) with all frequencies at omega0.
  Eigen::VectorXd equilibrium_state(const Eigen::VectorXd& p_load_w) const;
};

/// Builds the system for grid + placement. Generator dispatch is
/// proportional to rated power and balances the pre-event net load.
SystemMatrices assemble_system(const GridModel& grid,
                               const ReducedNetwork& reduced,
                               const Distribution& placement,
                               const StorageParams& storage);

struct TransientEvent {
  int bus_id = 0;        // load bus
  double delta_p_w = 0;  // net-load step; a generation loss of X W is +X
  double onset_s = 0;
};

struct TransientScenario {
  std::vector<TransientEvent> events;
  double horizon_s = 30.0;
};

struct SimulateOptions {
  double dt_s = 1e-3;
  double blowup_rad_s = 2.0 * kPi * 10.0;  // divergence guard on |w - w0|
};

/// Time series of one transient run. All series share the time grid; the
/// first sample is the pre-event equilibrium.
struct SimulationTrace {
  std::vector<double> times;
  Eigen::MatrixXd omega;          // samples x (n_g+n_s), rad/s
  Eigen::MatrixXd delta;          // samples x (n_g+n_s-1), rad
  Eigen::MatrixXd energy;         // samples x n_s, J
  Eigen::MatrixXd storage_power;  // samples x n_s, W
  std::vector<double> coi_weights;
  double omega0 = 0.0;
  int n_g = 0, n_s = 0;
};

/// Fixed-step classical RK4 over the piecewise-constant-input system.
/// Pure and deterministic; callable concurrently on shared inputs.
SimulationTrace simulate(const SystemMatrices& sys, const GridModel& grid,
                         const TransientScenario& scenario,
                         const SimulateOptions& opts = {});

struct FrequencyMetrics {
  double nadir_omega = 0;         // rad/s
  double nadir_cost = 0;          // |w0 - w_nadir|
  double time_of_nadir = 0;       // s
  double coi_extreme_omega = 0;   // worst COI excursion, rad/s
  double steady_state_omega = 0;  // final-sample mean of generator freqs
  bool settled = true;            // steady-state slope check on last 5%
  bool mixed_branches = false;    // some generators overshot, some undershot
};

/// Worst generator-frequency excursion over the trace. For near-zero
/// transients (both branches < 1e-9 rad/s) the nadir is omega0, cost 0.
FrequencyMetrics frequency_nadir(const SimulationTrace& trace, double omega0);

/// Closed-form post-event frequency deviation (rad/s, negative for a loss):
///   dw_ss = -3 P_trans / (sum 1/D_G + sum 1/D_S).
double predict_steady_state(const GridModel& grid,
                            const Distribution& placement,
                            const StorageParams& storage, double p_trans_w);

/// CSV export: t, generator/storage frequencies in Hz, energies in J,
/// relative angles in rad; fixed 9-significant-digit formatting.
std::string trace_to_csv(const SimulationTrace& trace);

}  // namespace gsp
