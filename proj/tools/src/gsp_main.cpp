// gsp: storage placement and sizing for grid frequency stability.
//
// Subcommands: validate, size, simulate, search, enumerate. Exit codes:
// 0 success, 2 config error, 3 numerical failure, 4 budget exceeded.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gsp/config.hpp"
#include "gsp/errors.hpp"
#include "gsp/report.hpp"

namespace {

int log_level() {
  const char* env = std::getenv("GSP_LOG");
  if (!env) return 0;
  const std::string v(env);
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string method;
  std::int64_t seed = -1;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required = true) {
  auto* opt = cmd->add_option("--config", flags.config_path, "run config file");
  if (config_required) opt->required();
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--seed", flags.seed, "RNG seed override");
  cmd->add_option("--workers", flags.workers, "concurrent evaluators");
  cmd->add_option("--method", flags.method, "brute|ce|both");
}

gsp::RunConfig load(const CommonFlags& flags) {
  gsp::RunConfig cfg = gsp::load_config_file(flags.config_path);
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (flags.seed >= 0) cfg.ce.seed = static_cast<std::uint64_t>(flags.seed);
  if (flags.workers > 0) cfg.workers = flags.workers;
  if (!flags.method.empty()) cfg.method = gsp::parse_method(flags.method);
  if (log_level() >= 1)
    std::cerr << "gsp: config=" << flags.config_path << " grid=" << cfg.grid_path
              << " n_s=" << cfg.n_s << " seed=" << cfg.ce.seed
              << " workers=" << cfg.workers << " out=" << cfg.out_dir << "\n";
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"storage placement for grid frequency stability"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string placement_literal;
  int enum_buses = 0, enum_units = 0;

  auto* cmd_validate = app.add_subcommand("validate", "check config + grid, report dimensions and sizing");
  add_common(cmd_validate, flags);
  auto* cmd_size = app.add_subcommand("size", "steady-state capacity bound and equal split");
  add_common(cmd_size, flags);
  auto* cmd_simulate = app.add_subcommand("simulate", "run the configured transients for one placement");
  add_common(cmd_simulate, flags);
  cmd_simulate->add_option("placement", placement_literal,
                           "placement literal, e.g. 7:2,10:3 (or 'none')")->required();
  auto* cmd_search = app.add_subcommand("search", "optimize the placement (brute force and/or CE)");
  add_common(cmd_search, flags);
  auto* cmd_enumerate = app.add_subcommand("enumerate", "count or list the placement space");
  cmd_enumerate->add_option("n_buses", enum_buses, "bus count")->required();
  cmd_enumerate->add_option("n_units", enum_units, "storage unit count")->required();
  bool enum_list = false;
  cmd_enumerate->add_flag("--list", enum_list, "print every placement");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      std::cout << gsp::run_validate(load(flags));
    } else if (cmd_size->parsed()) {
      std::cout << gsp::run_size(load(flags));
    } else if (cmd_simulate->parsed()) {
      const gsp::RunConfig cfg = load(flags);
      const gsp::GridModel grid = gsp::load_grid_file(cfg.grid_path);
      const gsp::Distribution placement =
          gsp::parse_distribution(placement_literal, grid.bus_count());
      std::cout << gsp::run_simulate(cfg, placement);
    } else if (cmd_search->parsed()) {
      std::cout << gsp::run_search(load(flags));
    } else if (cmd_enumerate->parsed()) {
      std::cout << gsp::distribution_count(enum_buses, enum_units) << "\n";
      if (enum_list) {
        gsp::DistributionEnumerator en(enum_buses, enum_units);
        gsp::Distribution d;
        while (en.next(d)) std::cout << d.slug() << "\n";
      }
    }
  } catch (const gsp::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const gsp::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gsp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  if (log_level() >= 1) std::cerr << "done\n";
  return 0;
}
