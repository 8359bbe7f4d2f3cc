#include "gsp/report.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gsp/errors.hpp"
#include "gsp/network.hpp"
#include "gsp/sizing.hpp"

namespace gsp {
namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kToHz = 1.0 / (2.0 * kPi);

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << content;
}

SizingResult sizing_for(const RunConfig& cfg, const GridModel& grid) {
  SizingSpec spec;
  spec.p_trans_w = cfg.p_trans_w();
  spec.delta_omega_ss_max = cfg.delta_omega_ss_max();
  for (int id : grid.generator_bus_ids())
    spec.generator_inv_dampings_ws.push_back(
        1.0 / grid.bus(id).gen.damping_d(grid.omega0));
  return split_capacity(total_storage_bound(spec), cfg.n_s);
}

StorageParams storage_for(const SizingResult& sizing, const RunConfig& cfg) {
  StorageParams storage;
  storage.inv_damping_ws = sizing.per_unit_inv_damping_ws;
  storage.filter_alpha_s = cfg.storage_alpha_s;
  return storage;
}

Evaluator make_evaluator(const RunConfig& cfg, const GridModel& grid,
                         const SizingResult& sizing) {
  SimulateOptions sim;
  sim.dt_s = cfg.dt_s;
  return Evaluator(grid, build_scenarios(cfg), storage_for(sizing, cfg),
                   cfg.coupling_b_pu, sim, cfg.aggregate);
}

ordered_json sizing_json(const SizingResult& sizing) {
  return {{"total_MWs", sizing.total_inv_damping_ws / 1e6},
          {"per_unit_MWs", sizing.per_unit_inv_damping_ws / 1e6},
          {"n_S", sizing.n_s},
          {"feasible", sizing.feasible}};
}

ordered_json record_json(const EvaluationRecord& rec) {
  return {{"counts", rec.dist.slug()},
          {"cost_hz", rec.cost_rad_s * kToHz},
          {"nadir_hz", rec.nadir_hz},
          {"coi_min_hz", rec.coi_extreme_hz},
          {"steady_state_hz", rec.steady_state_hz}};
}

std::string ranking_csv(const std::vector<EvaluationRecord>& ranking) {
  std::ostringstream out;
  out << "rank,counts,f_nadir_hz,f_coi_min_hz\n";
  int rank = 1;
  for (const auto& rec : ranking)
    out << rank++ << "," << rec.dist.slug() << "," << fmt9(rec.nadir_hz) << ","
        << fmt9(rec.coi_extreme_hz) << "\n";
  return out.str();
}

std::string convergence_csv(const CeResult& ce) {
  std::ostringstream out;
  out << "iteration,best_cost_hz\n";
  for (const auto& it : ce.per_iteration)
    out << it.iteration << "," << fmt9(it.best_cost_rad_s * kToHz) << "\n";
  return out.str();
}

}  // namespace

Distribution parse_distribution(const std::string& text, int n_buses) {
  Distribution d(n_buses);
  if (text.empty() || text == "none") return d;
  std::istringstream is(text);
  std::string part;
  while (std::getline(is, part, ',')) {
    const auto colon = part.find(':');
    int bus = 0, units = 1;
    try {
      if (colon == std::string::npos) {
        bus = std::stoi(part);
      } else {
        bus = std::stoi(part.substr(0, colon));
        units = std::stoi(part.substr(colon + 1));
      }
    } catch (const std::exception&) {
      throw ConfigError("bad placement literal '" + part +
                        "'; expected bus or bus:count");
    }
    if (bus < 1 || bus > n_buses)
      throw ConfigError("placement references unknown bus " + std::to_string(bus));
    if (units < 1) throw ConfigError("placement unit counts must be positive");
    d.counts[bus - 1] += units;
  }
  return d;
}

std::string run_validate(const RunConfig& cfg) {
  const GridModel grid = load_grid_file(cfg.grid_path);
  const SizingResult sizing = sizing_for(cfg, grid);

  // Exercise the reduction once so modeling errors surface here.
  const Distribution empty(grid.bus_count());
  const ReducedNetwork reduced = reduce_network(
      build_admittance(grid, empty, cfg.coupling_b_pu), grid.generator_count(), 0);
  (void)reduced;

  ordered_json report{
      {"grid", cfg.grid_path},
      {"n", grid.bus_count()},
      {"n_G", grid.generator_count()},
      {"n_L", grid.load_count()},
      {"n_S", cfg.n_s},
      {"solution_space", distribution_count(grid.bus_count(), cfg.n_s)},
      {"complexity_ratio", complexity_ratio(grid.bus_count(), cfg.n_s, cfg.ce)},
      {"p_trans_MW", cfg.p_trans_w() / 1e6},
      {"sizing", sizing_json(sizing)},
  };
  return report.dump(2) + "\n";
}

std::string run_size(const RunConfig& cfg) {
  const GridModel grid = load_grid_file(cfg.grid_path);
  return sizing_json(sizing_for(cfg, grid)).dump(2) + "\n";
}

std::string run_simulate(const RunConfig& cfg, const Distribution& placement) {
  const GridModel grid = load_grid_file(cfg.grid_path);
  if (static_cast<int>(placement.counts.size()) != grid.bus_count())
    throw ConfigError("placement does not match the grid bus count");

  SizingResult sizing = sizing_for(cfg, grid);
  if (placement.total_units() > 0 && cfg.n_s != placement.total_units()) {
    // Placement overrides n_s: re-split the same total over its unit count.
    sizing = split_capacity(sizing.total_inv_damping_ws, placement.total_units());
  }
  const Evaluator evaluator = make_evaluator(cfg, grid, sizing);

  const auto reduced = reduce_network(
      build_admittance(grid, placement, cfg.coupling_b_pu),
      grid.generator_count(),
      static_cast<int>(storage_nodes(grid, placement).size()));
  const SystemMatrices sys =
      assemble_system(grid, reduced, placement, evaluator.storage());

  SimulateOptions sim;
  sim.dt_s = cfg.dt_s;

  ordered_json scenarios_json = ordered_json::array();
  const auto& scenarios = evaluator.scenarios();
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    const SimulationTrace trace = simulate(sys, grid, scenarios[k], sim);
    const FrequencyMetrics m = frequency_nadir(trace, grid.omega0);
    std::string name = placement.slug();
    if (scenarios.size() > 1) name += "_s" + std::to_string(k + 1);
    const fs::path trace_path = fs::path(cfg.out_dir) / "traces" / (name + ".csv");
    write_file(trace_path, trace_to_csv(trace));
    scenarios_json.push_back({{"trace_csv_path", ("traces/" + name + ".csv")},
                              {"f_nadir_hz", m.nadir_omega * kToHz},
                              {"f_ss_hz", m.steady_state_omega * kToHz},
                              {"f_coi_min_hz", m.coi_extreme_omega * kToHz},
                              {"cost_hz", m.nadir_cost * kToHz},
                              {"time_of_nadir_s", m.time_of_nadir},
                              {"settled", m.settled}});
  }

  ordered_json report{{"counts", placement.slug()},
                      {"sizing", sizing_json(sizing)},
                      {"scenarios", scenarios_json}};
  const std::string text = report.dump(2) + "\n";
  write_file(fs::path(cfg.out_dir) / "metrics.json", text);
  return text;
}

std::string run_search(const RunConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const GridModel grid = load_grid_file(cfg.grid_path);
  const SizingResult sizing = sizing_for(cfg, grid);
  if (cfg.n_s > 0 && sizing.per_unit_inv_damping_ws <= 0)
    throw ConfigError(
        "capacity bound is zero: generators alone meet the steady-state "
        "limit, nothing to place");
  const Evaluator evaluator = make_evaluator(cfg, grid, sizing);

  const bool do_brute =
      cfg.method == SearchMethod::Brute || cfg.method == SearchMethod::Both;
  const bool do_ce =
      cfg.method == SearchMethod::Ce || cfg.method == SearchMethod::Both;

  ordered_json report{{"grid", cfg.grid_path},
                      {"n_S", cfg.n_s},
                      {"sizing", sizing_json(sizing)}};
  ordered_json stdout_extra;

  BruteForceResult brute;
  CeResult ce;
  double brute_wall_s = 0.0, ce_wall_s = 0.0;
  if (do_brute) {
    const auto t0 = clock::now();
    brute = brute_force_search(evaluator, cfg.n_s, cfg.brute_budget, cfg.workers);
    brute_wall_s = std::chrono::duration<double>(clock::now() - t0).count();
    const fs::path path = fs::path(cfg.out_dir) / "ranking.csv";
    write_file(path, ranking_csv(brute.ranking));
    report["brute"] = record_json(brute.best);
    report["ranking_csv_path"] = "ranking.csv";
  }
  if (do_ce) {
    const auto t0 = clock::now();
    ce = ce_search(evaluator, cfg.n_s, cfg.ce, cfg.workers);
    ce_wall_s = std::chrono::duration<double>(clock::now() - t0).count();
    const fs::path path = fs::path(cfg.out_dir) / "convergence.csv";
    write_file(path, convergence_csv(ce));
    report["ce"] = record_json(ce.best);
    report["ce"]["evaluations"] = ce.evaluations;
    report["ce"]["q_final"] = ce.q_final;
    report["convergence_csv_path"] = "convergence.csv";
  }

  const EvaluationRecord& best = do_brute ? brute.best : ce.best;
  report["best"] = record_json(best);

  const double ratio = complexity_ratio(grid.bus_count(), cfg.n_s, cfg.ce);
  if (do_brute && do_ce) {
    report["comparison"] = {
        {"brute_cost_hz", brute.best.cost_rad_s * kToHz},
        {"ce_cost_hz", ce.best.cost_rad_s * kToHz},
        {"agree", brute.best.dist == ce.best.dist},
        {"complexity_ratio", ratio},
        {"advice", ratio < 10.0 ? "brute" : "ce"},
    };
  } else {
    report["complexity_ratio"] = ratio;
  }

  // Trace of the winning placement, one file per scenario.
  const auto reduced = reduce_network(
      build_admittance(grid, best.dist, cfg.coupling_b_pu),
      grid.generator_count(),
      static_cast<int>(storage_nodes(grid, best.dist).size()));
  const SystemMatrices sys =
      assemble_system(grid, reduced, best.dist, evaluator.storage());
  SimulateOptions sim;
  sim.dt_s = cfg.dt_s;
  const auto& scenarios = evaluator.scenarios();
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    std::string name = best.dist.slug();
    if (scenarios.size() > 1) name += "_s" + std::to_string(k + 1);
    write_file(fs::path(cfg.out_dir) / "traces" / (name + ".csv"),
               trace_to_csv(simulate(sys, grid, scenarios[k], sim)));
  }

  // report.json stays a deterministic function of (config, seed); wall
  // times only go to stdout.
  write_file(fs::path(cfg.out_dir) / "report.json", report.dump(2) + "\n");
  if (do_brute) report["brute"]["wall_s"] = brute_wall_s;
  if (do_ce) report["ce"]["wall_s"] = ce_wall_s;
  return report.dump(2) + "\n";
}

}  // namespace gsp
