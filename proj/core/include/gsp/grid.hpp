#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gsp {

inline constexpr double kPi = 3.14159265358979323846;

enum class BusKind { Generator, Load };

/// Synchronous generator parameters. Stored fields come straight from the
/// grid file; rotor inertia, swing gain and droop damping are derived.
struct GeneratorParams {
  double rated_power_w = 0.0;   // P_rt
  double inertia_h_s = 6.0;     // H
  int pole_pairs = 2;           // p_f, even
  double droop_alpha = 0.05;    // dimensionless droop percentage

  /// J = 2 H P_rt / w0^2 * (p_f/2)^2   [W s^3]
  double rotor_inertia_j(double omega0) const {
    const double half_poles = pole_pairs / 2.0;
    return 2.0 * inertia_h_s * rated_power_w / (omega0 * omega0) * half_poles *
           half_poles;
  }

  /// K = 1/(J w0) * (p_f/2)^2   [1/(W s)]
  double swing_gain_k(double omega0) const {
    const double half_poles = pole_pairs / 2.0;
    return half_poles * half_poles / (rotor_inertia_j(omega0) * omega0);
  }

  /// D_G = alpha w0 / P_rt   [1/(W s)]
  double damping_d(double omega0) const {
    return droop_alpha * omega0 / rated_power_w;
  }
};

struct Bus {
  int id = 0;  // dense 1..n
  BusKind kind = BusKind::Load;
  GeneratorParams gen;  // meaningful only for generator buses
};

/// One transmission line; parallel lines are pre-summed into a single record.
struct LineSpec {
  int from = 0;
  int to = 0;
  double susceptance_pu = 0.0;  // |y_ik| on the grid's per-unit base
};

/// Immutable electrical network. Safe to share across evaluation threads
/// once constructed.
struct GridModel {
  std::vector<Bus> buses;   // ordered by id, ids are 1..n
  std::vector<LineSpec> lines;
  double omega0 = 2.0 * kPi * 50.0;  // rad/s
  double v_base_v = 400e3;           // V
  double p_base_va = 100e6;          // VA
  std::vector<double> load_w;  // per bus index: consumption in W, negative =
                               // renewable in-feed; zero on generator buses

  int bus_count() const { return static_cast<int>(buses.size()); }
  int generator_count() const;
  int load_count() const { return bus_count() - generator_count(); }

  /// Bus ids of generator (resp. load) buses in ascending id order.
  std::vector<int> generator_bus_ids() const;
  std::vector<int> load_bus_ids() const;

  const Bus& bus(int id) const;  // throws ConfigError on unknown id

  /// Sum of 1/D_G over all generators [W s].
  double total_generator_inverse_damping() const;

  /// Net load-bus injections in W (negative for consuming loads), ordered
  /// like load_bus_ids().
  std::vector<double> load_injections_w() const;
};

/// Parses the grid text format ([bases] / [buses] / [lines] / [loads]
/// sections, '#' comments). Validates all model invariants, including
/// network connectivity. Throws ParseError / ConfigError.
GridModel parse_grid(std::string_view text);

/// Inverse of parse_grid: parse(serialize(g)) reproduces g exactly.
std::string serialize_grid(const GridModel& grid);

GridModel load_grid_file(const std::string& path);

}  // namespace gsp
