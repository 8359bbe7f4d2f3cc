#pragma once

#include <string>

#include "gsp/config.hpp"
#include "gsp/distribution.hpp"

namespace gsp {

// Command-level orchestration behind the CLI subcommands. Every function
// returns the report as a JSON string (pretty-printed, deterministic key
// order) and, where noted, writes artifact files under cfg.out_dir:
//   report.json, ranking.csv, convergence.csv, traces/<dist-slug>.csv

/// Parses grid + config, builds the reduction once, reports dimensions,
/// solution-space size, complexity ratio and the sizing for this run.
std::string run_validate(const RunConfig& cfg);

/// Sizing only: {total_MWs, per_unit_MWs, n_S, feasible}.
std::string run_size(const RunConfig& cfg);

/// Simulates every configured scenario for one placement; writes
/// traces/<slug>.csv per scenario plus metrics to the returned JSON.
std::string run_simulate(const RunConfig& cfg, const Distribution& placement);

/// Brute-force and/or CE search per cfg.method; writes report.json,
/// ranking.csv (brute), convergence.csv (CE) and the best placement's trace.
std::string run_search(const RunConfig& cfg);

/// Parses a placement literal like "7:2,10:3" against a bus count.
Distribution parse_distribution(const std::string& text, int n_buses);

}  // namespace gsp
