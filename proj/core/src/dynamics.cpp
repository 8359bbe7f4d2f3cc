#include "gsp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "gsp/errors.hpp"

namespace gsp {
namespace {

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

}  // namespace

Eigen::VectorXd SystemMatrices::equilibrium_state(
    const Eigen::VectorXd& p_load_w) const {
  // Angles solving G delta = P_ref - H P_L; the system is consistent when
  // generation balances load, G has full column rank on a connected grid.
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(angle_dim());
  if (angle_dim() > 0) {
    const Eigen::VectorXd rhs = p_ref_w - h_w * p_load_w;
    delta = g_w.colPivHouseholderQr().solve(rhs);
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(state_dim());
  x.segment(0, angle_dim()) = delta;
  x.segment(angle_dim(), freq_dim()).setConstant(omega0);
  return x;
}

SystemMatrices assemble_system(const GridModel& grid,
                               const ReducedNetwork& reduced,
                               const Distribution& placement,
                               const StorageParams& storage) {
  const auto nodes = storage_nodes(grid, placement);
  const int n_g = grid.generator_count();
  const int n_s = static_cast<int>(nodes.size());
  if (reduced.n_g != n_g || reduced.n_s != n_s ||
      reduced.n_l != grid.load_count())
    throw ConfigError("reduced network does not match grid + placement");
  if (n_s > 0 && storage.inv_damping_ws <= 0)
    throw ConfigError("storage placed but per-unit 1/D_S is not positive");
  if (n_s > 0 && storage.filter_alpha_s <= 0)
    throw ConfigError("storage filter constant must be positive");

  SystemMatrices sys;
  sys.omega0 = grid.omega0;
  sys.n_g = n_g;
  sys.n_s = n_s;
  sys.n_l = reduced.n_l;
  for (const auto& node : nodes) sys.storage_host_bus.push_back(node.host_bus_id);

  const int m = n_g + n_s;
  sys.g_w = grid.p_base_va * reduced.g();
  sys.h_w = reduced.h;

  // Diagonal gains of Eq.-style blocks: F_G = 3K, Phi_G = K/D_G for
  // generators; F_S = 3 D_S / alpha, Phi_S = 1/alpha for storage nodes,
  // where a node of k units has 1/D_S = k * unit capacity.
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(m);
  double j_tot = 0.0;
  std::vector<double> inertia;
  {
    int row = 0;
    for (int id : grid.generator_bus_ids()) {
      const GeneratorParams& gen = grid.bus(id).gen;
      const double k = gen.swing_gain_k(grid.omega0);
      f(row) = 3.0 * k;
      phi(row) = k / gen.damping_d(grid.omega0);
      inertia.push_back(gen.rotor_inertia_j(grid.omega0));
      j_tot += inertia.back();
      ++row;
    }
    for (const auto& node : nodes) {
      const double node_damping = 1.0 / (node.units * storage.inv_damping_ws);
      f(row) = 3.0 * node_damping / storage.filter_alpha_s;
      phi(row) = 1.0 / storage.filter_alpha_s;
      ++row;
    }
  }
  for (double j : inertia) sys.coi_weights.push_back(j / j_tot);

  // Dispatch proportional to rated power, balancing the pre-event net load.
  double net_consumption = 0.0;
  for (double inj : grid.load_injections_w()) net_consumption -= inj;
  double rated_total = 0.0;
  for (int id : grid.generator_bus_ids()) rated_total += grid.bus(id).gen.rated_power_w;
  sys.p_ref_w = Eigen::VectorXd::Zero(m);
  {
    int row = 0;
    for (int id : grid.generator_bus_ids())
      sys.p_ref_w(row++) =
          net_consumption * grid.bus(id).gen.rated_power_w / rated_total;
  }

  const int na = m - 1;
  const int dim = na + m + n_s;
  sys.a = Eigen::MatrixXd::Zero(dim, dim);
  sys.b = Eigen::MatrixXd::Zero(dim, m + reduced.n_l);
  sys.affine = Eigen::VectorXd::Zero(dim);

  // Angle block: delta_i' = omega_{i+1} - omega_1.
  for (int i = 0; i < na; ++i) {
    sys.a(i, na) = -1.0;
    sys.a(i, na + i + 1) = 1.0;
  }
  // Frequency block: omega' = -F G delta - Phi omega + F P_ref - F H P_L
  //                           + Phi w0 1.
  sys.a.block(na, 0, m, na) = -(f.asDiagonal() * sys.g_w);
  sys.a.block(na, na, m, m) = Eigen::MatrixXd((-phi).asDiagonal());
  sys.b.block(na, 0, m, m) = Eigen::MatrixXd(f.asDiagonal());
  sys.b.block(na, m, m, reduced.n_l) = -(f.asDiagonal() * sys.h_w);
  sys.affine.segment(na, m) = phi * grid.omega0;
  // Energy block: E_S' = P_S, the storage rows of the reduced power flow.
  if (n_s > 0) {
    sys.a.block(na + m, 0, n_s, na) = sys.g_w.bottomRows(n_s);
    sys.b.block(na + m, m, n_s, reduced.n_l) = sys.h_w.bottomRows(n_s);
  }
  return sys;
}

SimulationTrace simulate(const SystemMatrices& sys, const GridModel& grid,
                         const TransientScenario& scenario,
                         const SimulateOptions& opts) {
  if (opts.dt_s <= 0) throw ConfigError("dt must be positive");
  if (scenario.horizon_s <= 0) throw ConfigError("horizon must be positive");

  const auto load_ids = grid.load_bus_ids();
  auto load_index = [&load_ids](int bus_id) {
    const auto it = std::find(load_ids.begin(), load_ids.end(), bus_id);
    if (it == load_ids.end())
      throw ConfigError("transient event bus " + std::to_string(bus_id) +
                        " is not a load bus");
    return static_cast<int>(it - load_ids.begin());
  };
  for (const auto& ev : scenario.events) {
    if (ev.onset_s < 0 || ev.onset_s >= scenario.horizon_s)
      throw ConfigError("event onset outside [0, horizon)");
    load_index(ev.bus_id);
  }

  const int m = sys.freq_dim();
  const int na = sys.angle_dim();
  const auto base_inj = grid.load_injections_w();
  Eigen::VectorXd p_load =
      Eigen::Map<const Eigen::VectorXd>(base_inj.data(), base_inj.size());

  // Input vector for a given time: injections drop by the active steps.
  auto input_at = [&](double t) {
    Eigen::VectorXd u(m + sys.n_l);
    u.head(m) = sys.p_ref_w;
    Eigen::VectorXd inj = p_load;
    for (const auto& ev : scenario.events)
      if (t >= ev.onset_s) inj(load_index(ev.bus_id)) -= ev.delta_p_w;
    u.tail(sys.n_l) = inj;
    return u;
  };

  std::set<double> cuts{0.0, scenario.horizon_s};
  for (const auto& ev : scenario.events)
    if (ev.onset_s > 0) cuts.insert(ev.onset_s);

  const std::size_t approx_samples =
      static_cast<std::size_t>(scenario.horizon_s / opts.dt_s) + cuts.size() + 2;

  SimulationTrace trace;
  trace.omega0 = sys.omega0;
  trace.n_g = sys.n_g;
  trace.n_s = sys.n_s;
  trace.coi_weights = sys.coi_weights;
  trace.times.reserve(approx_samples);
  std::vector<Eigen::VectorXd> states;
  states.reserve(approx_samples);
  std::vector<Eigen::VectorXd> storage_p;
  storage_p.reserve(approx_samples);

  Eigen::VectorXd x = sys.equilibrium_state(p_load);

  auto record = [&](double t, const Eigen::VectorXd& state,
                    const Eigen::VectorXd& u) {
    trace.times.push_back(t);
    states.push_back(state);
    if (sys.n_s > 0) {
      const Eigen::VectorXd p_gs =
          sys.g_w * state.head(na) + sys.h_w * u.tail(sys.n_l);
      storage_p.push_back(p_gs.tail(sys.n_s));
    } else {
      storage_p.emplace_back(0);
    }
    const double worst =
        (state.segment(na, m).array() - sys.omega0).abs().maxCoeff();
    if (worst > opts.blowup_rad_s) {
      int idx = 0;
      (state.segment(na, m).array() - sys.omega0).abs().maxCoeff(&idx);
      const std::string name = idx < sys.n_g
                                   ? "omega_G_" + std::to_string(idx + 1)
                                   : "omega_S_" + std::to_string(idx - sys.n_g + 1);
      throw NumericalError("unstable integration: " + name + " diverged at t=" +
                           std::to_string(t));
    }
  };

  Eigen::VectorXd k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size());
  auto deriv = [&sys](const Eigen::VectorXd& state, const Eigen::VectorXd& u,
                      Eigen::VectorXd& out) {
    out = sys.a * state + sys.b * u + sys.affine;
  };

  double segment_start = 0.0;
  bool first_segment = true;
  for (auto it = std::next(cuts.begin()); it != cuts.end(); ++it) {
    const double segment_end = *it;
    const Eigen::VectorXd u = input_at(segment_start);
    if (first_segment) {
      record(0.0, x, u);
      first_segment = false;
    }
    const double seg_len = segment_end - segment_start;
    const long n_steps =
        std::max<long>(1, static_cast<long>(std::ceil(seg_len / opts.dt_s - 1e-9)));
    for (long k = 1; k <= n_steps; ++k) {
      const double t0 = segment_start + (k - 1) * opts.dt_s;
      const double t1 =
          (k == n_steps) ? segment_end : segment_start + k * opts.dt_s;
      const double h = t1 - t0;
      deriv(x, u, k1);
      deriv(x + 0.5 * h * k1, u, k2);
      deriv(x + 0.5 * h * k2, u, k3);
      deriv(x + h * k3, u, k4);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      record(t1, x, input_at(t1));
    }
    segment_start = segment_end;
  }

  const int samples = static_cast<int>(trace.times.size());
  trace.omega.resize(samples, m);
  trace.delta.resize(samples, na);
  trace.energy.resize(samples, sys.n_s);
  trace.storage_power.resize(samples, sys.n_s);
  for (int i = 0; i < samples; ++i) {
    trace.delta.row(i) = states[i].head(na).transpose();
    trace.omega.row(i) = states[i].segment(na, m).transpose();
    trace.energy.row(i) = states[i].tail(sys.n_s).transpose();
    trace.storage_power.row(i) = storage_p[i].transpose();
  }
  return trace;
}

FrequencyMetrics frequency_nadir(const SimulationTrace& trace, double omega0) {
  if (trace.times.empty()) throw ConfigError("empty trace");
  const auto gen = trace.omega.leftCols(trace.n_g);

  int min_row = 0, min_col = 0, max_row = 0, max_col = 0;
  const double w_min = gen.minCoeff(&min_row, &min_col);
  const double w_max = gen.maxCoeff(&max_row, &max_col);
  const double below = omega0 - w_min;
  const double above = w_max - omega0;

  FrequencyMetrics metrics;
  constexpr double kQuietTol = 1e-9;
  metrics.mixed_branches = below > kQuietTol && above > kQuietTol;
  if (below <= kQuietTol && above <= kQuietTol) {
    metrics.nadir_omega = omega0;
    metrics.nadir_cost = 0.0;
    metrics.time_of_nadir = trace.times.front();
  } else if (below >= above) {
    metrics.nadir_omega = w_min;
    metrics.nadir_cost = below;
    metrics.time_of_nadir = trace.times[min_row];
  } else {
    metrics.nadir_omega = w_max;
    metrics.nadir_cost = above;
    metrics.time_of_nadir = trace.times[max_row];
  }

  // Center-of-inertia series and its worst excursion on the chosen branch.
  Eigen::VectorXd weights(trace.n_g);
  for (int i = 0; i < trace.n_g; ++i) weights(i) = trace.coi_weights[i];
  const Eigen::VectorXd coi = gen * weights;
  metrics.coi_extreme_omega =
      (below >= above) ? coi.minCoeff() : coi.maxCoeff();

  metrics.steady_state_omega = gen.row(gen.rows() - 1).mean();

  // Slope check over the trailing 5% of the horizon.
  const int n = static_cast<int>(trace.times.size());
  const int tail_start = std::max(1, n - std::max(2, n / 20));
  double max_slope = 0.0;
  for (int i = tail_start; i < n; ++i) {
    const double dt = trace.times[i] - trace.times[i - 1];
    if (dt <= 0) continue;
    const double slope =
        ((gen.row(i) - gen.row(i - 1)).cwiseAbs() / dt).maxCoeff();
    max_slope = std::max(max_slope, slope);
  }
  metrics.settled = max_slope < 1e-4;
  return metrics;
}

double predict_steady_state(const GridModel& grid,
                            const Distribution& placement,
                            const StorageParams& storage, double p_trans_w) {
  double total = grid.total_generator_inverse_damping();
  for (const auto& node : storage_nodes(grid, placement))
    total += node.units * storage.inv_damping_ws;
  if (total <= 0) throw NumericalError("zero total damping");
  return -3.0 * p_trans_w / total;
}

std::string trace_to_csv(const SimulationTrace& trace) {
  std::ostringstream out;
  out << "t";
  for (int i = 0; i < trace.n_g; ++i) out << ",omega_G_" << i + 1;
  for (int i = 0; i < trace.n_s; ++i) out << ",omega_S_" << i + 1;
  for (int i = 0; i < trace.n_s; ++i) out << ",E_S_" << i + 1;
  for (int i = 0; i < static_cast<int>(trace.delta.cols()); ++i)
    out << ",delta_" << i + 2;  // relative to node 1
  out << "\n";
  const double to_hz = 1.0 / (2.0 * kPi);
  for (int r = 0; r < static_cast<int>(trace.times.size()); ++r) {
    out << fmt9(trace.times[r]);
    for (int c = 0; c < trace.omega.cols(); ++c)
      out << "," << fmt9(trace.omega(r, c) * to_hz);
    for (int c = 0; c < trace.energy.cols(); ++c)
      out << "," << fmt9(trace.energy(r, c));
    for (int c = 0; c < trace.delta.cols(); ++c)
      out << "," << fmt9(trace.delta(r, c));
    out << "\n";
  }
  return out.str();
}

}  // namespace gsp
