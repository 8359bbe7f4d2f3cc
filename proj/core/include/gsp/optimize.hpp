#pragma once

#include <cstdint>
#include <vector>

#include "gsp/distribution.hpp"
#include "gsp/dynamics.hpp"
#include "gsp/grid.hpp"
#include "gsp/rng.hpp"

namespace gsp {

struct EvaluationRecord {
  Distribution dist;
  double cost_rad_s = 0.0;  // worst |w0 - w_nadir| across scenarios
  double nadir_hz = 0.0;
  double coi_extreme_hz = 0.0;
  double steady_state_hz = 0.0;
};

/// Whether a multi-scenario set is scored by the worst case over separate
/// runs or merged into one combined event list first.
enum class ScenarioAggregate { WorstCase, SingleCombined };

/// Simulation-in-the-loop cost function: placement -> worst nadir deviation.
/// Immutable after construction; evaluate() is pure and thread-safe.
class Evaluator {
public:
  Evaluator(GridModel grid, std::vector<TransientScenario> scenarios,
            StorageParams per_unit_storage, double coupling_b_pu,
            SimulateOptions sim_opts,
            ScenarioAggregate aggregate = ScenarioAggregate::WorstCase);

  EvaluationRecord evaluate(const Distribution& placement) const;

  const GridModel& grid() const { return grid_; }
  const std::vector<TransientScenario>& scenarios() const { return scenarios_; }
  const StorageParams& storage() const { return storage_; }

private:
  GridModel grid_;
  std::vector<TransientScenario> scenarios_;  // post-aggregation
  StorageParams storage_;
  double coupling_b_pu_;
  SimulateOptions sim_opts_;
};

struct BruteForceResult {
  EvaluationRecord best;
  std::vector<EvaluationRecord> ranking;  // ascending cost
};

/// Exhaustive search over all placements of n_units. Ties break toward the
/// lexicographically smallest counts vector. Throws BudgetError when the
/// space exceeds `budget` evaluations.
BruteForceResult brute_force_search(const Evaluator& evaluator, int n_units,
                                    std::uint64_t budget, int workers = 1);

/// The ceil(eps*|X|)-th smallest cost.
double elite_threshold(const std::vector<double>& costs, double elite_fraction);

/// Indices of the elite group: cost <= gamma, truncated to exactly
/// ceil(eps*|X|) members in stable sample order.
std::vector<std::size_t> elite_indices(const std::vector<double>& costs,
                                       double elite_fraction);

/// n_units categorical draws over buses, aggregated into a placement.
Distribution ce_sample(const std::vector<double>& q, int n_units,
                       CounterRng& rng);

/// Smoothed occurrence update
///   q_i' = beta * O_i / (|elite| * n_S) + (1 - beta) * q_i,
/// renormalized to a probability vector.
std::vector<double> ce_update(const std::vector<double>& q,
                              const std::vector<Distribution>& elite,
                              double beta);

struct CeConfig {
  int n_iter = 20;
  int samples_per_iter = 150;
  double elite_fraction = 0.125;
  double smoothing = 0.03;
  std::uint64_t seed = 1;
};

struct CeIterationStats {
  int iteration = 0;           // 1-based
  double gamma_rad_s = 0.0;    // elite threshold this iteration
  double best_cost_rad_s = 0.0;  // global incumbent after this iteration
};

struct CeResult {
  EvaluationRecord best;
  std::vector<double> q_final;
  std::vector<CeIterationStats> per_iteration;
  std::uint64_t evaluations = 0;
};

/// Cross-entropy search. Deterministic for a fixed seed regardless of the
/// worker count (per-sample RNG substreams, index-ordered collection).
CeResult ce_search(const Evaluator& evaluator, int n_units,
                   const CeConfig& cfg, int workers = 1);

/// Exhaustive-space size over total CE evaluations, C(n+nS-1,nS)/(N*|X|).
double complexity_ratio(int n_buses, int n_units, const CeConfig& cfg);

}  // namespace gsp
