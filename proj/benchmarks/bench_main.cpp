#include <benchmark/benchmark.h>

#include <string>

#include "gsp/distribution.hpp"
#include "gsp/dynamics.hpp"
#include "gsp/grid.hpp"
#include "gsp/network.hpp"
#include "gsp/optimize.hpp"

using namespace gsp;

namespace {

GridModel load(const char* name) {
  return load_grid_file(std::string(GSP_DATA_DIR) + "/" + name);
}

Distribution sample_placement(const GridModel& grid) {
  Distribution d(grid.bus_count());
  d.counts[grid.bus_count() - 1] = 2;
  d.counts[grid.bus_count() / 2] = 1;
  return d;
}

void bench_enumeration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int units = static_cast<int>(state.range(1));
  for (auto _ : state) {
    DistributionEnumerator en(n, units);
    Distribution d;
    std::uint64_t count = 0;
    while (en.next(d)) ++count;
    benchmark::DoNotOptimize(count);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(distribution_count(n, units)));
}
BENCHMARK(bench_enumeration)->Args({20, 5})->Args({24, 6});

void bench_reduction(benchmark::State& state) {
  const GridModel grid = load("twenty_bus.grid");
  const Distribution d = sample_placement(grid);
  for (auto _ : state) {
    const Eigen::MatrixXd u = build_admittance(grid, d, 1000.0);
    const ReducedNetwork red = reduce_network(
        u, grid.generator_count(),
        static_cast<int>(storage_nodes(grid, d).size()));
    benchmark::DoNotOptimize(red.schur);
  }
}
BENCHMARK(bench_reduction);

void bench_simulate(benchmark::State& state) {
  const GridModel grid = load("twenty_bus.grid");
  const Distribution d = sample_placement(grid);
  StorageParams storage;
  storage.inv_damping_ws = 100e6;
  const ReducedNetwork red = reduce_network(
      build_admittance(grid, d, 1000.0), grid.generator_count(),
      static_cast<int>(storage_nodes(grid, d).size()));
  const SystemMatrices sys = assemble_system(grid, red, d, storage);
  TransientScenario sc;
  sc.horizon_s = static_cast<double>(state.range(0));
  sc.events.push_back({9, 350e6, 0.0});
  for (auto _ : state) {
    const SimulationTrace tr = simulate(sys, grid, sc, {.dt_s = 1e-3});
    benchmark::DoNotOptimize(tr.omega);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(sc.horizon_s / 1e-3));
}
BENCHMARK(bench_simulate)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void bench_evaluate(benchmark::State& state) {
  GridModel grid = load("twenty_bus.grid");
  TransientScenario sc;
  sc.horizon_s = 10.0;
  sc.events.push_back({9, 350e6, 0.0});
  StorageParams storage;
  storage.inv_damping_ws = 100e6;
  const Evaluator ev(grid, {sc}, storage, 1000.0, {.dt_s = 2e-3});
  const Distribution d = sample_placement(ev.grid());
  for (auto _ : state) {
    const EvaluationRecord r = ev.evaluate(d);
    benchmark::DoNotOptimize(r.cost_rad_s);
  }
}
BENCHMARK(bench_evaluate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
