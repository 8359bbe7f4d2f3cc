#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gsp/distribution.hpp"
#include "gsp/grid.hpp"

namespace gsp {

/// One aggregated storage node: all units placed on the same bus collapse
/// into a single inverter (parallel identical first-order droops with equal
/// filter constants are equivalent to one with summed 1/D_S).
struct StorageNode {
  int host_bus_id = 0;
  int units = 0;
};

/// Aggregated storage nodes for a placement, ordered by host bus id.
std::vector<StorageNode> storage_nodes(const GridModel& grid,
                                       const Distribution& placement);

/// Weighted-graph Laplacian over the node ordering
/// [generators | storage nodes | loads], in per-unit. Each storage node is
/// tied to its host bus by coupling_b. Symmetric, zero row sums,
/// non-positive off-diagonals.
Eigen::MatrixXd build_admittance(const GridModel& grid,
                                 const Distribution& placement,
                                 double coupling_b);

/// DC power flow after eliminating the load-bus angles:
///   P_gs = schur * delta_gs + h * P_L          (per-unit)
/// with schur = U11 - U12 U22^-1 U21 and h = U12 U22^-1.
/// g() drops the first (reference) column of schur so it acts on angles
/// relative to generator 1.
struct ReducedNetwork {
  Eigen::MatrixXd schur;  // (n_g+n_s) x (n_g+n_s)
  Eigen::MatrixXd h;      // (n_g+n_s) x n_l
  int n_g = 0;
  int n_s = 0;  // storage *nodes* (aggregated), not units
  int n_l = 0;

  Eigen::MatrixXd g() const { return schur.rightCols(schur.cols() - 1); }
};

/// Schur-complement (Kron) reduction of the admittance Laplacian. The first
/// n_g + n_s rows/columns are generator and storage nodes; the trailing
/// block is the load-load partition U22, which must be well conditioned
/// (relative condition estimate <= 1e12).
ReducedNetwork reduce_network(const Eigen::MatrixXd& admittance, int n_g,
                              int n_s);

}  // namespace gsp
