#include "gsp/network.hpp"

#include <limits>
#include <string>

#include "gsp/errors.hpp"

namespace gsp {

std::vector<StorageNode> storage_nodes(const GridModel& grid,
                                       const Distribution& placement) {
  if (static_cast<int>(placement.counts.size()) > grid.bus_count())
    throw ConfigError("placement references unknown bus " +
                      std::to_string(placement.counts.size()));
  std::vector<StorageNode> nodes;
  for (int i = 0; i < static_cast<int>(placement.counts.size()); ++i) {
    const int units = placement.counts[i];
    if (units < 0) throw ConfigError("negative unit count in placement");
    if (units > 0) nodes.push_back({i + 1, units});
  }
  return nodes;
}

Eigen::MatrixXd build_admittance(const GridModel& grid,
                                 const Distribution& placement,
                                 double coupling_b) {
  if (coupling_b <= 0) throw ConfigError("coupling susceptance must be positive");
  const auto nodes = storage_nodes(grid, placement);
  const int n_g = grid.generator_count();
  const int n_s = static_cast<int>(nodes.size());
  const int n = grid.bus_count();
  const int total = n + n_s;

  // Matrix position of each bus: generators first, then storage, then loads.
  std::vector<int> pos(n, -1);
  int next = 0;
  for (int id : grid.generator_bus_ids()) pos[id - 1] = next++;
  next += n_s;
  for (int id : grid.load_bus_ids()) pos[id - 1] = next++;

  Eigen::MatrixXd ups = Eigen::MatrixXd::Zero(total, total);
  auto add_edge = [&ups](int a, int b, double y) {
    ups(a, b) -= y;
    ups(b, a) -= y;
    ups(a, a) += y;
    ups(b, b) += y;
  };
  for (const LineSpec& l : grid.lines)
    add_edge(pos[l.from - 1], pos[l.to - 1], l.susceptance_pu);
  for (int k = 0; k < n_s; ++k)
    add_edge(n_g + k, pos[nodes[k].host_bus_id - 1], coupling_b);
  return ups;
}

ReducedNetwork reduce_network(const Eigen::MatrixXd& admittance, int n_g,
                              int n_s) {
  const int total = static_cast<int>(admittance.rows());
  const int m = n_g + n_s;
  if (admittance.cols() != total || m < 1 || m > total)
    throw ConfigError("reduce_network: dimension mismatch");
  const int n_l = total - m;

  ReducedNetwork red;
  red.n_g = n_g;
  red.n_s = n_s;
  red.n_l = n_l;

  const Eigen::MatrixXd u11 = admittance.topLeftCorner(m, m);
  if (n_l == 0) {
    red.schur = u11;
    red.h = Eigen::MatrixXd::Zero(m, 0);
    return red;
  }

  const Eigen::MatrixXd u12 = admittance.topRightCorner(m, n_l);
  const Eigen::MatrixXd u21 = admittance.bottomLeftCorner(n_l, m);
  const Eigen::MatrixXd u22 = admittance.bottomRightCorner(n_l, n_l);

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(u22);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(n_l - 1);
  if (!(smin > 0) || smax / smin > 1e12)
    throw NumericalError(
        "singular load-load partition U22 (condition estimate " +
        std::to_string(smin > 0 ? smax / smin : std::numeric_limits<double>::infinity()) +
        ")");

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(u22);
  const Eigen::MatrixXd u22inv_u21 = lu.solve(u21);
  red.h = lu.solve(u12.transpose()).transpose();  // U12 * U22^-1
  red.schur = u11 - u12 * u22inv_u21;
  return red;
}

}  // namespace gsp
