#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "gsp/errors.hpp"
#include "gsp/network.hpp"
#include "helpers.hpp"

using namespace gsp;

TEST_CASE("network: two-bus Laplacian") {
  const GridModel g = testing::two_bus(300.0, 5.0);
  const Eigen::MatrixXd u = build_admittance(g, Distribution(2), 1000.0);
  REQUIRE(u.rows() == 2);
  CHECK(u(0, 0) == doctest::Approx(5.0));
  CHECK(u(0, 1) == doctest::Approx(-5.0));
  CHECK(u(1, 0) == doctest::Approx(-5.0));
  CHECK(u(1, 1) == doctest::Approx(5.0));
}

TEST_CASE("network: Laplacian structure on random grids") {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 8; ++trial) {
    const GridModel g = testing::random_grid(rng, 2, 6);
    Distribution d(g.bus_count());
    d.counts[3] = 2;
    d.counts[6] = 1;
    const Eigen::MatrixXd u = build_admittance(g, d, 500.0);
    const int m = static_cast<int>(u.rows());
    CHECK(m == g.bus_count() + 2);  // two aggregated storage nodes
    CHECK((u - u.transpose()).norm() == doctest::Approx(0.0).epsilon(1e-12));
    for (int i = 0; i < m; ++i) {
      CHECK(u.row(i).sum() == doctest::Approx(0.0).epsilon(1e-9));
      for (int j = 0; j < m; ++j)
        if (i != j) CHECK(u(i, j) <= 0.0);
    }
  }
}

TEST_CASE("network: storage aggregation groups co-located units") {
  const GridModel g = testing::two_bus();
  Distribution d(2);
  d.counts[1] = 3;
  const auto nodes = storage_nodes(g, d);
  REQUIRE(nodes.size() == 1);
  CHECK(nodes[0].host_bus_id == 2);
  CHECK(nodes[0].units == 3);
}

TEST_CASE("network: reduction against dense DC solve oracle") {
  // For any boundary angles d_gs and load injections P_L, the reduced model
  //   P_gs = schur * d_gs + h * P_L
  // must match eliminating the load angles densely from the full Laplacian.
  std::mt19937 rng(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const GridModel g = testing::random_grid(rng, 2, 5);
    Distribution d(g.bus_count());
    d.counts[trial % g.bus_count()] = 1 + trial % 3;
    const Eigen::MatrixXd u = build_admittance(g, d, 800.0);
    const int n_s = static_cast<int>(storage_nodes(g, d).size());
    const int n_gs = g.generator_count() + n_s;
    const int n_l = static_cast<int>(u.rows()) - n_gs;
    const ReducedNetwork red = reduce_network(u, g.generator_count(), n_s);
    REQUIRE(red.schur.rows() == n_gs);
    REQUIRE(red.h.cols() == n_l);

    const Eigen::VectorXd d_gs =
        Eigen::VectorXd::NullaryExpr(n_gs, [&](Eigen::Index) { return normal(rng); });
    const Eigen::VectorXd p_l =
        Eigen::VectorXd::NullaryExpr(n_l, [&](Eigen::Index) { return normal(rng); });

    const Eigen::MatrixXd u22 = u.bottomRightCorner(n_l, n_l);
    const Eigen::MatrixXd u21 = u.bottomLeftCorner(n_l, n_gs);
    const Eigen::VectorXd d_l = u22.fullPivLu().solve(p_l - u21 * d_gs);
    const Eigen::VectorXd p_gs_dense =
        u.topLeftCorner(n_gs, n_gs) * d_gs + u.topRightCorner(n_gs, n_l) * d_l;
    const Eigen::VectorXd p_gs_reduced = red.schur * d_gs + red.h * p_l;
    CHECK((p_gs_dense - p_gs_reduced).lpNorm<Eigen::Infinity>() <
          1e-10 * (1.0 + p_gs_dense.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("network: g() drops the reference column") {
  const GridModel g = testing::two_bus(300.0, 5.0);
  Distribution d(2);
  d.counts[1] = 1;  // one unit at the load bus
  const double c = 1000.0, b = 5.0;
  const ReducedNetwork red =
      reduce_network(build_admittance(g, d, c), 1, 1);
  const double kappa = b * c / (b + c);
  CHECK(red.schur(0, 0) == doctest::Approx(kappa).epsilon(1e-12));
  CHECK(red.schur(0, 1) == doctest::Approx(-kappa).epsilon(1e-12));
  CHECK(red.schur(1, 1) == doctest::Approx(kappa).epsilon(1e-12));
  CHECK(red.h(0, 0) == doctest::Approx(-b / (b + c)).epsilon(1e-12));
  CHECK(red.h(1, 0) == doctest::Approx(-c / (b + c)).epsilon(1e-12));
  const Eigen::MatrixXd gg = red.g();
  REQUIRE(gg.cols() == 1);
  CHECK(gg(0, 0) == doctest::Approx(-kappa).epsilon(1e-12));
  CHECK(gg(1, 0) == doctest::Approx(kappa).epsilon(1e-12));
}

TEST_CASE("network: near-singular load partition raises NumericalError") {
  // A load node electrically disconnected from the boundary makes U22
  // singular; build the Laplacian by hand to bypass grid validation.
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(3, 3);
  u(0, 0) = 5.0;
  u(0, 1) = u(1, 0) = -5.0;
  u(1, 1) = 5.0;
  // load node 2 has no ties at all -> zero row/col
  CHECK_THROWS_AS(reduce_network(u, 1, 0), NumericalError);
}

TEST_CASE("network: zero-load grids reduce with an empty h") {
  // All buses are generators; there is nothing to eliminate.
  const GridModel g = parse_grid(
      "[bases]\nv_base_kv 400\np_base_mva 100\nf0_hz 50\n"
      "[buses]\n1 generator 1000 6 2 0.05\n2 generator 800 5 2 0.05\n"
      "[lines]\n1 2 4\n");
  const Eigen::MatrixXd u = build_admittance(g, Distribution(2), 1000.0);
  const ReducedNetwork red = reduce_network(u, 2, 0);
  CHECK(red.h.cols() == 0);
  CHECK((red.schur - u).norm() == doctest::Approx(0.0));
}
