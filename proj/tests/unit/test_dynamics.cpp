#include <doctest.h>

#include <cmath>

#include "gsp/dynamics.hpp"
#include "gsp/errors.hpp"
#include "gsp/network.hpp"
#include "helpers.hpp"

using namespace gsp;

namespace {

constexpr double kB = 5.0;     // line susceptance, pu
constexpr double kC = 1000.0;  // storage coupling, pu

struct Toy {
  GridModel grid;
  Distribution placement;
  StorageParams storage;
  SystemMatrices sys;
};

/// One generator (bus 1), one load bus (bus 2) and one storage unit on the
/// load bus: every matrix entry has a closed form.
Toy toy_system(double inv_damping_ws = 100e6) {
  Toy t{testing::two_bus(300.0, kB), Distribution(2), {}, {}};
  t.placement.counts[1] = 1;
  t.storage.inv_damping_ws = inv_damping_ws;
  const ReducedNetwork red =
      reduce_network(build_admittance(t.grid, t.placement, kC), 1, 1);
  t.sys = assemble_system(t.grid, red, t.placement, t.storage);
  return t;
}

}  // namespace

TEST_CASE("dynamics: toy 4x4 system matches hand-computed entries") {
  const Toy t = toy_system();
  const SystemMatrices& s = t.sys;
  REQUIRE(s.state_dim() == 4);  // [delta_S, omega_G, omega_S, E_S]
  REQUIRE(s.angle_dim() == 1);
  REQUIRE(s.freq_dim() == 2);

  const double w0 = t.grid.omega0;
  const GeneratorParams& gen = t.grid.bus(1).gen;
  const double k = gen.swing_gain_k(w0);
  const double d_g = gen.damping_d(w0);
  const double kappa_w = kB * kC / (kB + kC) * t.grid.p_base_va;  // W/rad
  const double alpha_s = t.storage.filter_alpha_s;
  const double d_s = 1.0 / t.storage.inv_damping_ws;

  // Row 0: delta_S' = omega_S - omega_G.
  CHECK(s.a(0, 0) == 0.0);
  CHECK(s.a(0, 1) == doctest::Approx(-1.0));
  CHECK(s.a(0, 2) == doctest::Approx(1.0));
  // Row 1: omega_G' = K(3 P_ref - 3 P_G - (omega_G - w0)/D_G).
  CHECK(s.a(1, 0) == doctest::Approx(3.0 * k * kappa_w).epsilon(1e-12));
  CHECK(s.a(1, 1) == doctest::Approx(-k / d_g).epsilon(1e-12));
  CHECK(s.affine(1) == doctest::Approx(k / d_g * w0).epsilon(1e-12));
  // Input columns are [P_ref_G, P_ref_S, P_L].
  CHECK(s.b(1, 0) == doctest::Approx(3.0 * k).epsilon(1e-12));
  CHECK(s.b(1, 2) == doctest::Approx(3.0 * k * kB / (kB + kC)).epsilon(1e-12));
  // Row 2: omega_S' = (3 D_S (0 - P_S) - (omega_S - w0)) / alpha_S.
  CHECK(s.a(2, 0) == doctest::Approx(-3.0 * d_s / alpha_s * kappa_w).epsilon(1e-12));
  CHECK(s.a(2, 2) == doctest::Approx(-1.0 / alpha_s).epsilon(1e-12));
  CHECK(s.affine(2) == doctest::Approx(w0 / alpha_s).epsilon(1e-12));
  CHECK(s.b(2, 0) == 0.0);
  CHECK(s.b(2, 2) ==
        doctest::Approx(3.0 * d_s / alpha_s * kC / (kB + kC)).epsilon(1e-12));
  // Row 3: E_S' = P_S = kappa * delta_S + h_S * P_L.
  CHECK(s.a(3, 0) == doctest::Approx(kappa_w).epsilon(1e-12));
  CHECK(s.b(3, 2) == doctest::Approx(-kC / (kB + kC)).epsilon(1e-12));
  // Dispatch covers the full 300 MW load on the only generator.
  CHECK(s.p_ref_w(0) == doctest::Approx(300e6));
  CHECK(s.p_ref_w(1) == 0.0);
}

TEST_CASE("dynamics: equilibrium state is a fixed point") {
  const Toy t = toy_system();
  const Eigen::VectorXd p_l = Eigen::VectorXd::Constant(1, -300e6);
  const Eigen::VectorXd x = t.sys.equilibrium_state(p_l);
  Eigen::VectorXd u(3);
  u << t.sys.p_ref_w, p_l;
  const Eigen::VectorXd xdot = t.sys.a * x + t.sys.b * u + t.sys.affine;
  CHECK(xdot.lpNorm<Eigen::Infinity>() < 1e-5);  // watts-scale arithmetic
  CHECK(x(1) == doctest::Approx(t.grid.omega0));
  CHECK(x(2) == doctest::Approx(t.grid.omega0));
}

TEST_CASE("dynamics: zero-event scenario stays at equilibrium") {
  const Toy t = toy_system();
  TransientScenario sc;
  sc.horizon_s = 2.0;
  const SimulationTrace tr = simulate(t.sys, t.grid, sc, {.dt_s = 1e-3});
  CHECK((tr.omega.array() - t.grid.omega0).abs().maxCoeff() < 1e-9);
  const FrequencyMetrics m = frequency_nadir(tr, t.grid.omega0);
  CHECK(m.nadir_cost == 0.0);
  CHECK(m.nadir_omega == doctest::Approx(t.grid.omega0));
}

TEST_CASE("dynamics: steady state matches the closed-form prediction") {
  SUBCASE("single generator, no storage") {
    const GridModel g = testing::two_bus(300.0, kB);
    const Distribution none(2);
    const ReducedNetwork red =
        reduce_network(build_admittance(g, none, kC), 1, 0);
    const SystemMatrices sys = assemble_system(g, red, none, {});
    TransientScenario sc;
    sc.horizon_s = 40.0;
    sc.events.push_back({2, 120e6, 0.0});
    const SimulationTrace tr = simulate(sys, g, sc, {.dt_s = 1e-3});
    const FrequencyMetrics m = frequency_nadir(tr, g.omega0);
    // dw = -3 dP D_G exactly for one generator.
    const double expect = -3.0 * 120e6 * g.bus(1).gen.damping_d(g.omega0);
    CHECK(m.settled);
    CHECK(m.steady_state_omega - g.omega0 ==
          doctest::Approx(expect).epsilon(1e-9));
    CHECK(expect ==
          doctest::Approx(predict_steady_state(g, none, {}, 120e6)).epsilon(1e-12));
  }
  SUBCASE("generator plus storage") {
    const Toy t = toy_system(150e6);
    TransientScenario sc;
    sc.horizon_s = 40.0;
    sc.events.push_back({2, 90e6, 0.0});
    const SimulationTrace tr = simulate(t.sys, t.grid, sc, {.dt_s = 1e-3});
    const FrequencyMetrics m = frequency_nadir(tr, t.grid.omega0);
    const double expect =
        predict_steady_state(t.grid, t.placement, t.storage, 90e6);
    CHECK(m.settled);
    CHECK(m.steady_state_omega - t.grid.omega0 ==
          doctest::Approx(expect).epsilon(1e-8));
  }
}

TEST_CASE("dynamics: storage reduces the nadir") {
  const GridModel g = testing::two_bus(300.0, kB);
  TransientScenario sc;
  sc.horizon_s = 30.0;
  sc.events.push_back({2, 150e6, 0.0});

  const Distribution none(2);
  const ReducedNetwork red0 = reduce_network(build_admittance(g, none, kC), 1, 0);
  const SimulationTrace bare =
      simulate(assemble_system(g, red0, none, {}), g, sc, {});
  const Toy t = toy_system(200e6);
  const SimulationTrace with = simulate(t.sys, t.grid, sc, {});
  CHECK(frequency_nadir(with, g.omega0).nadir_cost <
        frequency_nadir(bare, g.omega0).nadir_cost);
}

TEST_CASE("dynamics: RK4 step-halving converges on the nadir") {
  const Toy t = toy_system();
  TransientScenario sc;
  sc.horizon_s = 10.0;
  sc.events.push_back({2, 100e6, 0.0});
  const double n1 =
      frequency_nadir(simulate(t.sys, t.grid, sc, {.dt_s = 2e-3}), t.grid.omega0)
          .nadir_cost;
  const double n2 =
      frequency_nadir(simulate(t.sys, t.grid, sc, {.dt_s = 1e-3}), t.grid.omega0)
          .nadir_cost;
  const double n3 =
      frequency_nadir(simulate(t.sys, t.grid, sc, {.dt_s = 5e-4}), t.grid.omega0)
          .nadir_cost;
  CHECK(std::abs(n2 - n1) < 1e-7 * (2.0 * kPi));
  CHECK(std::abs(n3 - n2) < 1e-7 * (2.0 * kPi));
}

TEST_CASE("dynamics: energy state equals the trapezoid of storage power") {
  const Toy t = toy_system();
  TransientScenario sc;
  sc.horizon_s = 8.0;
  sc.events.push_back({2, 100e6, 0.0});
  const SimulationTrace tr = simulate(t.sys, t.grid, sc, {.dt_s = 1e-3});
  double integral = 0.0;
  double peak = 0.0;
  for (int i = 1; i < static_cast<int>(tr.times.size()); ++i) {
    const double dt = tr.times[i] - tr.times[i - 1];
    integral += 0.5 * dt * (tr.storage_power(i, 0) + tr.storage_power(i - 1, 0));
    peak = std::max(peak, std::abs(tr.energy(i, 0)));
  }
  const double final_e = tr.energy(tr.energy.rows() - 1, 0);
  CHECK(std::abs(final_e - integral) < 1e-6 * std::max(1.0, peak));
}

TEST_CASE("dynamics: event onsets segment the integration") {
  const Toy t = toy_system();
  TransientScenario sc;
  sc.horizon_s = 12.0;
  sc.events.push_back({2, 60e6, 0.0});
  sc.events.push_back({2, 60e6, 3.0005});  // off the dt grid on purpose
  const SimulationTrace tr = simulate(t.sys, t.grid, sc, {.dt_s = 1e-3});
  // Exact onset time must be a sample point.
  bool found = false;
  for (double ts : tr.times) found |= (ts == 3.0005);
  CHECK(found);
  // Both events act: steady state equals the 120 MW prediction.
  const FrequencyMetrics m = frequency_nadir(tr, t.grid.omega0);
  CHECK(m.steady_state_omega - t.grid.omega0 ==
        doctest::Approx(predict_steady_state(t.grid, t.placement, t.storage,
                                             120e6))
            .epsilon(1e-6));
}

TEST_CASE("dynamics: blow-up guard raises NumericalError") {
  const Toy t = toy_system();
  TransientScenario sc;
  sc.horizon_s = 30.0;
  sc.events.push_back({2, 100e6, 0.0});
  // A step far beyond the stability limit of explicit RK4 on this system.
  CHECK_THROWS_AS(simulate(t.sys, t.grid, sc, {.dt_s = 1.0}), NumericalError);
}

TEST_CASE("dynamics: event on a non-load bus is rejected") {
  const Toy t = toy_system();
  TransientScenario sc;
  sc.horizon_s = 5.0;
  sc.events.push_back({1, 50e6, 0.0});
  CHECK_THROWS_AS(simulate(t.sys, t.grid, sc, {}), ConfigError);
}

TEST_CASE("dynamics: nadir branch selection") {
  SimulationTrace tr;
  tr.n_g = 2;
  tr.n_s = 0;
  tr.omega0 = 100.0;
  tr.coi_weights = {0.5, 0.5};
  tr.times = {0.0, 1.0, 2.0, 3.0};
  tr.omega.resize(4, 2);
  tr.delta.resize(4, 1);
  tr.delta.setZero();
  tr.energy.resize(4, 0);
  tr.storage_power.resize(4, 0);

  SUBCASE("undershoot dominates") {
    tr.omega << 100, 100, 99.0, 100.4, 99.5, 100.2, 99.8, 100.0;
    const FrequencyMetrics m = frequency_nadir(tr, 100.0);
    CHECK(m.nadir_omega == doctest::Approx(99.0));
    CHECK(m.nadir_cost == doctest::Approx(1.0));
    CHECK(m.time_of_nadir == doctest::Approx(1.0));
    CHECK(m.mixed_branches);
    // COI extreme follows the undershoot branch: min of row means.
    CHECK(m.coi_extreme_omega == doctest::Approx(99.7));
  }
  SUBCASE("overshoot dominates") {
    tr.omega << 100, 100, 101.5, 100.4, 100.5, 100.2, 100.1, 100.0;
    const FrequencyMetrics m = frequency_nadir(tr, 100.0);
    CHECK(m.nadir_omega == doctest::Approx(101.5));
    CHECK(m.nadir_cost == doctest::Approx(1.5));
    CHECK(m.coi_extreme_omega == doctest::Approx(100.95));
  }
}

TEST_CASE("dynamics: trace CSV header and formatting") {
  const Toy t = toy_system();
  TransientScenario sc;
  sc.horizon_s = 0.01;
  sc.events.push_back({2, 50e6, 0.0});
  const SimulationTrace tr = simulate(t.sys, t.grid, sc, {.dt_s = 1e-3});
  const std::string csv = trace_to_csv(tr);
  CHECK(csv.rfind("t,omega_G_1,omega_S_1,E_S_1,delta_2\n", 0) == 0);
  // 9 significant digits, scientific.
  CHECK(csv.find("5.00000000e+01") != std::string::npos);
}
