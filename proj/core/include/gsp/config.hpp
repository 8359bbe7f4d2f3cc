#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsp/optimize.hpp"
#include "gsp/sizing.hpp"

namespace gsp {

enum class SearchMethod { Brute, Ce, Both };

struct ScenarioEventSpec {
  int bus_id = 0;
  double loss_mw = 0.0;  // renewable generation loss = net-load step
  double onset_s = 0.0;
};

struct ScenarioSpec {
  std::vector<ScenarioEventSpec> events;
};

/// Operator-facing run description. Accepted either in the grid-file text
/// grammar ([run]/[sizing]/[storage]/[scenario]/[ce] sections) or as JSON
/// with the same field names.
struct RunConfig {
  std::string grid_path;
  std::vector<ScenarioSpec> scenarios;

  int n_s = 0;
  SearchMethod method = SearchMethod::Brute;
  CeConfig ce;

  double delta_f_ss_max_hz = 0.2;
  double p_trans_mw = -1.0;  // < 0: sum of event losses
  DeviationUnits deviation_units = DeviationUnits::RadPerSec;
  ScenarioAggregate aggregate = ScenarioAggregate::WorstCase;

  double dt_s = 1e-3;
  double horizon_s = 30.0;
  double coupling_b_pu = 1000.0;
  double storage_alpha_s = 0.1;

  std::uint64_t brute_budget = 200000;
  int workers = 1;
  std::string out_dir = "out";

  /// Effective P_trans in watts for sizing.
  double p_trans_w() const;
  /// Deviation limit in the units Eq.-style sizing expects.
  double delta_omega_ss_max() const;
};

RunConfig parse_config(const std::string& text, const std::string& base_dir);
RunConfig load_config_file(const std::string& path);

SearchMethod parse_method(const std::string& name);

/// Scenario specs -> dynamics scenarios with the configured horizon.
std::vector<TransientScenario> build_scenarios(const RunConfig& cfg);

}  // namespace gsp
