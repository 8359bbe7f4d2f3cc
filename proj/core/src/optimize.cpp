#include "gsp/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gsp/errors.hpp"
#include "gsp/parallel.hpp"
#include "gsp/sizing.hpp"

namespace gsp {
namespace {

constexpr double kToHz = 1.0 / (2.0 * kPi);

bool better(const EvaluationRecord& a, const EvaluationRecord& b) {
  if (a.cost_rad_s != b.cost_rad_s) return a.cost_rad_s < b.cost_rad_s;
  return a.dist.counts < b.dist.counts;
}

}  // namespace

Evaluator::Evaluator(GridModel grid, std::vector<TransientScenario> scenarios,
                     StorageParams per_unit_storage, double coupling_b_pu,
                     SimulateOptions sim_opts, ScenarioAggregate aggregate)
    : grid_(std::move(grid)),
      storage_(per_unit_storage),
      coupling_b_pu_(coupling_b_pu),
      sim_opts_(sim_opts) {
  if (scenarios.empty()) throw ConfigError("no transient events configured");
  if (aggregate == ScenarioAggregate::SingleCombined && scenarios.size() > 1) {
    TransientScenario combined;
    combined.horizon_s = 0.0;
    for (const auto& s : scenarios) {
      combined.horizon_s = std::max(combined.horizon_s, s.horizon_s);
      combined.events.insert(combined.events.end(), s.events.begin(),
                             s.events.end());
    }
    scenarios_.push_back(std::move(combined));
  } else {
    scenarios_ = std::move(scenarios);
  }
}

EvaluationRecord Evaluator::evaluate(const Distribution& placement) const {
  try {
    const Eigen::MatrixXd ups =
        build_admittance(grid_, placement, coupling_b_pu_);
    const ReducedNetwork reduced = reduce_network(
        ups, grid_.generator_count(),
        static_cast<int>(storage_nodes(grid_, placement).size()));
    const SystemMatrices sys =
        assemble_system(grid_, reduced, placement, storage_);

    EvaluationRecord record;
    record.dist = placement;
    bool first = true;
    for (const auto& scenario : scenarios_) {
      const SimulationTrace trace = simulate(sys, grid_, scenario, sim_opts_);
      const FrequencyMetrics m = frequency_nadir(trace, grid_.omega0);
      if (first || m.nadir_cost > record.cost_rad_s) {
        record.cost_rad_s = m.nadir_cost;
        record.nadir_hz = m.nadir_omega * kToHz;
        record.coi_extreme_hz = m.coi_extreme_omega * kToHz;
        record.steady_state_hz = m.steady_state_omega * kToHz;
        first = false;
      }
    }
    return record;
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " (placement " +
                         placement.slug() + ")");
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) + " (placement " +
                      placement.slug() + ")");
  }
}

BruteForceResult brute_force_search(const Evaluator& evaluator, int n_units,
                                    std::uint64_t budget, int workers) {
  const int n = evaluator.grid().bus_count();
  const std::uint64_t count = distribution_count(n, n_units);
  if (count > budget)
    throw BudgetError("brute force needs " + std::to_string(count) +
                      " evaluations, budget is " + std::to_string(budget) +
                      "; a complexity ratio >> 1 calls for the CE method");

  std::vector<Distribution> all;
  all.reserve(count);
  DistributionEnumerator en(n, n_units);
  Distribution d;
  while (en.next(d)) all.push_back(d);

  BruteForceResult result;
  result.ranking.resize(all.size());
  parallel_for(all.size(), workers, [&](std::size_t i) {
    result.ranking[i] = evaluator.evaluate(all[i]);
  });

  result.best = result.ranking.front();
  for (const auto& rec : result.ranking)
    if (better(rec, result.best)) result.best = rec;

  std::stable_sort(result.ranking.begin(), result.ranking.end(),
                   [](const EvaluationRecord& a, const EvaluationRecord& b) {
                     return better(a, b);
                   });
  return result;
}

double elite_threshold(const std::vector<double>& costs,
                       double elite_fraction) {
  if (costs.empty()) throw ConfigError("elite_threshold on empty costs");
  const std::size_t k = static_cast<std::size_t>(
      std::ceil(elite_fraction * static_cast<double>(costs.size())));
  const std::size_t rank = std::clamp<std::size_t>(k, 1, costs.size());
  std::vector<double> sorted(costs);
  std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
  return sorted[rank - 1];
}

std::vector<std::size_t> elite_indices(const std::vector<double>& costs,
                                       double elite_fraction) {
  const double gamma = elite_threshold(costs, elite_fraction);
  const std::size_t k = std::clamp<std::size_t>(
      static_cast<std::size_t>(
          std::ceil(elite_fraction * static_cast<double>(costs.size()))),
      1, costs.size());
  std::vector<std::size_t> elite;
  for (std::size_t i = 0; i < costs.size() && elite.size() < k; ++i)
    if (costs[i] <= gamma) elite.push_back(i);
  return elite;
}

Distribution ce_sample(const std::vector<double>& q, int n_units,
                       CounterRng& rng) {
  Distribution d(static_cast<int>(q.size()));
  for (int draw = 0; draw < n_units; ++draw) ++d.counts[rng.categorical(q)];
  return d;
}

std::vector<double> ce_update(const std::vector<double>& q,
                              const std::vector<Distribution>& elite,
                              double beta) {
  if (elite.empty()) throw ConfigError("ce_update with empty elite group");
  const int n = static_cast<int>(q.size());
  const int n_units = elite.front().total_units();

  std::vector<double> occurrences(n, 0.0);
  for (const auto& d : elite)
    for (int i = 0; i < n; ++i) occurrences[i] += d.counts[i];

  const double denom =
      static_cast<double>(elite.size()) * std::max(1, n_units);
  std::vector<double> next(n, 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    next[i] = beta * occurrences[i] / denom + (1.0 - beta) * q[i];
    total += next[i];
  }
  for (double& v : next) v /= total;
  return next;
}

CeResult ce_search(const Evaluator& evaluator, int n_units,
                   const CeConfig& cfg, int workers) {
  if (cfg.n_iter < 0 || cfg.samples_per_iter < 1 ||
      cfg.elite_fraction <= 0.0 || cfg.elite_fraction >= 1.0 ||
      cfg.smoothing <= 0.0 || cfg.smoothing > 1.0)
    throw ConfigError("invalid CE configuration");

  const int n = evaluator.grid().bus_count();
  CeResult result;
  result.q_final.assign(n, 1.0 / n);
  if (cfg.n_iter == 0) {
    // Degenerate config: uniform q, no incumbent (NaN cost flags it).
    result.best.cost_rad_s = std::numeric_limits<double>::quiet_NaN();
    return result;
  }

  std::vector<double> q = result.q_final;
  bool have_best = false;

  for (int iter = 1; iter <= cfg.n_iter; ++iter) {
    // Draws are sequential per (iteration, sample) substream; evaluations
    // run in parallel and are collected in sample order.
    std::vector<Distribution> samples(cfg.samples_per_iter);
    for (int k = 0; k < cfg.samples_per_iter; ++k) {
      CounterRng rng(cfg.seed, static_cast<std::uint64_t>(iter),
                     static_cast<std::uint64_t>(k));
      samples[k] = ce_sample(q, n_units, rng);
    }
    std::vector<EvaluationRecord> records(samples.size());
    parallel_for(samples.size(), workers, [&](std::size_t i) {
      records[i] = evaluator.evaluate(samples[i]);
    });
    result.evaluations += samples.size();

    std::vector<double> costs(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
      costs[i] = records[i].cost_rad_s;

    for (const auto& rec : records) {
      if (!have_best || better(rec, result.best)) {
        result.best = rec;
        have_best = true;
      }
    }

    const auto elite_idx = elite_indices(costs, cfg.elite_fraction);
    std::vector<Distribution> elite;
    elite.reserve(elite_idx.size());
    for (std::size_t idx : elite_idx) elite.push_back(samples[idx]);
    const double gamma = elite_threshold(costs, cfg.elite_fraction);
    q = ce_update(q, elite, cfg.smoothing);

    result.per_iteration.push_back({iter, gamma, result.best.cost_rad_s});
  }
  result.q_final = q;
  return result;
}

double complexity_ratio(int n_buses, int n_units, const CeConfig& cfg) {
  const std::uint64_t space = distribution_count(n_buses, n_units);
  const double ce_evals =
      static_cast<double>(cfg.n_iter) * cfg.samples_per_iter;
  if (ce_evals <= 0) throw ConfigError("CE evaluation count must be positive");
  return static_cast<double>(space) / ce_evals;
}

}  // namespace gsp
