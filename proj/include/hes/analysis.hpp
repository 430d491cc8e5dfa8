#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hes/common.hpp"
#include "hes/economics.hpp"
#include "hes/mesh.hpp"
#include "hes/model.hpp"
#include "hes/simplex.hpp"
#include "hes/solve_report.hpp"
#include "hes/trajectory.hpp"
#include "hes/transcription.hpp"

namespace hes {

/// Decodes a primal solution into time series via the problem's column layout
/// and recomputes the node values from the model, not from the LP rows.
inline Trajectory extract_trajectory(const SolveReport& report, const LpProblem& lp,
                                     const HesConfig& config) {
  if (static_cast<long>(report.primal.size()) != lp.n_cols ||
      lp.layout.total != lp.n_cols)
    throw HesError("extract_trajectory: layout mismatch");
  const VariableLayout& L = lp.layout;
  const long N = lp.mesh.n_nodes, K = lp.mesh.n_intervals();
  const auto& x = report.primal;
  auto at = [&x](long c) { return x[static_cast<size_t>(c)]; };

  Trajectory traj;
  traj.mesh = lp.mesh;
  traj.x_g.resize(static_cast<size_t>(N));
  for (long n = 0; n < N; ++n) traj.x_g[static_cast<size_t>(n)] = at(L.col_xg(n));
  for (Domain d : kDomains) {
    if (!L.enabled[d]) continue;
    traj.x_s[d].resize(static_cast<size_t>(N));
    for (long n = 0; n < N; ++n) traj.x_s[d][static_cast<size_t>(n)] = at(L.col_xs(d, n));
    traj.charge[d].resize(static_cast<size_t>(K));
    traj.discharge[d].resize(static_cast<size_t>(K));
    traj.sale[d].resize(static_cast<size_t>(K));
    for (long k = 0; k < K; ++k) {
      traj.charge[d][static_cast<size_t>(k)] = at(L.col_charge(d, k));
      traj.discharge[d][static_cast<size_t>(k)] = at(L.col_discharge(d, k));
      traj.sale[d][static_cast<size_t>(k)] = at(L.col_sale(d, k));
    }
    traj.sigma[d] = at(L.col_sigma(d));
  }
  if (L.has_gen_control) {
    traj.u_g.resize(static_cast<size_t>(K));
    for (long k = 0; k < K; ++k) traj.u_g[static_cast<size_t>(k)] = at(L.col_ug(k));
  }
  traj.nodes.resize(static_cast<size_t>(K));
  traj.grid_power.resize(static_cast<size_t>(K));
  for (long k = 0; k < K; ++k) {
    const NodeValues n = eval_nodes(config, traj.x_g[static_cast<size_t>(k)], traj.control_at(k));
    traj.nodes[static_cast<size_t>(k)] = n;
    traj.grid_power[static_cast<size_t>(k)] = n.n9;
  }
  return traj;
}

/// Fractional splits of generator energy, load coverage, and revenue. Each
/// split sums to exactly 1 when its denominator is nonzero; otherwise the
/// corresponding `*_defined` flag is false and the fractions are zero.
struct EnergyAccounting {
  bool generator_defined = false;
  double frac_grid = 0.0;                 // exported at the grid node, pre-combustion
  std::array<double, 3> frac_charge{};    // per storage domain
  double frac_primary_load = 0.0;         // includes the tertiary charging draw
  double frac_electric_load = 0.0;

  std::array<bool, 2> load_defined{};     // [0] primary load, [1] electric load
  std::array<double, 2> load_from_generator{};
  std::array<double, 2> load_from_storage{};

  bool revenue_defined = false;
  double rev_frac_primary = 0.0, rev_frac_electric = 0.0, rev_frac_tertiary = 0.0;
  double rev_storage_share = 0.0;  // discounted revenue of discharge/sale terms
};

/// Integrates the destinations of generator energy (in generator-side energy
/// equivalents: electric-side quantities are divided by eta_g so that the
/// fractions partition the fuel-side output exactly) and the sources covering
/// each parasitic load.
inline EnergyAccounting energy_accounting(const Trajectory& traj, const HesConfig& c,
                                          const PriceSeries& prices) {
  const long K = traj.mesh.n_intervals();
  const double eta_g = c.generator.eta_g;
  EnergyAccounting acc;

  double gen = 0.0, chg[3] = {0, 0, 0}, load_p = 0.0, load_e = 0.0, grid = 0.0;
  double gross_load[2] = {0, 0}, storage_cover[2] = {0, 0}, net_load[2] = {0, 0};
  double rev_total = 0.0, rev[3] = {0, 0, 0}, rev_storage = 0.0;

  for (long k = 0; k < K; ++k) {
    const size_t ks = static_cast<size_t>(k);
    const double xg = traj.x_g[ks];
    const ControlPoint u = traj.control_at(k);
    const NodeValues& n = traj.nodes[ks];
    gen += xg;
    if (c.storage[P].enabled) chg[P] += u.charge[P];
    if (c.storage[E].enabled) chg[E] += u.charge[E] / eta_g;
    if (c.storage[T].enabled) chg[T] += u.charge[T] / eta_g;
    load_p += n.l_gp + n.l_gpt;
    load_e += n.l_ge / eta_g;
    grid += n.n8 / eta_g;  // export measured before the combustion add-on

    gross_load[0] += c.loads.l_p * xg;
    net_load[0] += n.l_gp;
    if (c.storage[P].enabled)
      storage_cover[0] += c.storage[P].eta_out * (u.discharge[P] - u.sale[P]);
    gross_load[1] += c.loads.l_e * xg;
    net_load[1] += n.l_ge;
    if (c.storage[E].enabled)
      storage_cover[1] += c.storage[E].eta_out * (u.discharge[E] - u.sale[E]);

    const double w =
        traj.mesh.h / discount_factor(traj.mesh.time_at(k) - traj.mesh.t0, c.economics.r);
    const PriceSample pr = prices.at(k);
    double grid_rev = pr.e * n.n9;
    if (c.storage[E].enabled) grid_rev += pr.e * c.storage[E].eta_out * u.sale[E];
    rev[E] += w * grid_rev;
    if (c.storage[P].enabled) rev[P] += w * pr.p * c.storage[P].eta_out * u.sale[P];
    if (c.storage[T].enabled) rev[T] += w * pr.t * c.storage[T].eta_out * u.sale[T];
    // revenue carried by discharge or sale variables only
    ControlPoint ds;
    ds.discharge = u.discharge;
    ds.sale = u.sale;
    double sr = pr.e * eval_nodes(c, 0.0, ds).n9;
    if (c.storage[P].enabled) sr += pr.p * c.storage[P].eta_out * u.sale[P];
    if (c.storage[E].enabled) sr += pr.e * c.storage[E].eta_out * u.sale[E];
    if (c.storage[T].enabled) sr += pr.t * c.storage[T].eta_out * u.sale[T];
    rev_storage += w * sr;
  }
  rev_total = rev[0] + rev[1] + rev[2];

  if (gen > 0.0) {
    acc.generator_defined = true;
    acc.frac_grid = grid / gen;
    for (int d = 0; d < 3; ++d) acc.frac_charge[d] = chg[d] / gen;
    acc.frac_primary_load = load_p / gen;
    acc.frac_electric_load = load_e / gen;
  }
  for (int i = 0; i < 2; ++i)
    if (gross_load[i] > 0.0) {
      acc.load_defined[i] = true;
      acc.load_from_generator[i] = net_load[i] / gross_load[i];
      acc.load_from_storage[i] = storage_cover[i] / gross_load[i];
    }
  if (rev_total != 0.0) {
    acc.revenue_defined = true;
    acc.rev_frac_primary = rev[P] / rev_total;
    acc.rev_frac_electric = rev[E] / rev_total;
    acc.rev_frac_tertiary = rev[T] / rev_total;
    acc.rev_storage_share = rev_storage / rev_total;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

struct SweepAxis {
  std::string name;            // config path, e.g. "economics.c_occ_e"
  std::vector<double> values;
};

struct SweepPoint {
  std::vector<double> coords;        // one value per axis
  std::string status;                // solver status string
  double npv = 0.0;
  std::array<double, 3> sigma{};
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<SweepPoint> points;  // row-major over the axes (last varies fastest)
};

/// Applies one axis value to a configuration (and, for price axes, to the
/// signal set). Supported paths: economics.{c_occ_g,c_occ_p,c_occ_e,c_occ_t,
/// c_co2,r}, scenario.peak_window (afternoon window of that many hours
/// starting at 15:00), and price_{e,p,t,fuel}.scale.
inline void apply_sweep_axis(HesConfig& config, SignalSet& signals, const std::string& name,
                             double value) {
  auto scale_signal = [value](Signal& s) {
    for (auto& [h, v] : s.samples) v *= value;
  };
  if (name == "economics.c_occ_g") config.economics.c_occ_g = value;
  else if (name == "economics.c_occ_p") config.economics.c_occ[P] = value;
  else if (name == "economics.c_occ_e") config.economics.c_occ[E] = value;
  else if (name == "economics.c_occ_t") config.economics.c_occ[T] = value;
  else if (name == "economics.c_co2") config.economics.c_co2 = value;
  else if (name == "economics.r") config.economics.r = value;
  else if (name == "scenario.peak_window") {
    config.scenario.peak_hours.clear();
    const int len = static_cast<int>(std::llround(value));
    if (std::abs(value - len) > 1e-9 || len < 0 || len > 9)
      throw HesError("scenario.peak_window length must be an integer in [0, 9]");
    for (int i = 0; i < len; ++i) config.scenario.peak_hours.push_back(15 + i);
  } else if (name == "price_e.scale") scale_signal(signals.price_e);
  else if (name == "price_p.scale") scale_signal(signals.price_p);
  else if (name == "price_t.scale") scale_signal(signals.price_t);
  else if (name == "price_fuel.scale") scale_signal(signals.price_fuel);
  else throw HesError("unknown sweep axis '" + name + "'");
}

/// One end-to-end solve: validate, assemble, overlay, scale, solve, unscale.
inline std::pair<SolveReport, LpProblem> solve_config(const HesConfig& config,
                                                      const SignalSet& signals, double tol = 1e-9,
                                                      double objective_scale = 1e-9,
                                                      long max_iter = -1) {
  const ValidationReport vr = validate_config(config);
  if (!vr.ok()) throw HesError("invalid configuration: " + vr.violations.front());
  const Mesh mesh = build_mesh(config.horizon.t0, config.horizon.tf, config.horizon.h);
  const MeshSignals ms = prepare_signals(config, signals, mesh);
  LpProblem lp = assemble_lp(config, mesh, ms);
  lp = apply_scenario_overlay(lp, config.scenario, mesh);
  const LpProblem scaled = scale_lp(lp, objective_scale);
  SolveReport rep = solve(scaled, tol, max_iter);
  rep = unscale_solution(rep, scaled);
  return {std::move(rep), std::move(lp)};
}

/// Solves the cross product of the axes. Deterministic: point i of the
/// row-major grid always lands at index i regardless of worker count.
inline SweepResult run_sweep(const HesConfig& base, const SignalSet& signals,
                             const std::vector<SweepAxis>& axes, int workers = 1,
                             double tol = 1e-9, double objective_scale = 1e-9) {
  SweepResult result;
  result.axes = axes;
  long total = 1;
  for (const auto& ax : axes) {
    if (ax.values.empty()) throw HesError("sweep axis '" + ax.name + "' has no values");
    total *= static_cast<long>(ax.values.size());
  }
  result.points.resize(static_cast<size_t>(total));

  auto solve_point = [&](long index) {
    SweepPoint& pt = result.points[static_cast<size_t>(index)];
    HesConfig config = base;
    SignalSet sigs = signals;
    long rem = index;
    pt.coords.resize(axes.size());
    for (long a = static_cast<long>(axes.size()) - 1; a >= 0; --a) {
      const auto& ax = axes[static_cast<size_t>(a)];
      const long n = static_cast<long>(ax.values.size());
      pt.coords[static_cast<size_t>(a)] = ax.values[static_cast<size_t>(rem % n)];
      rem /= n;
    }
    try {
      for (size_t a = 0; a < axes.size(); ++a)
        apply_sweep_axis(config, sigs, axes[a].name, pt.coords[a]);
      auto [rep, lp] = solve_config(config, sigs, tol, objective_scale);
      pt.status = to_string(rep.status);
      if (rep.status == SolveStatus::Optimal || rep.status == SolveStatus::FeasibleUnverified) {
        pt.npv = rep.objective;
        const Trajectory traj = extract_trajectory(rep, lp, config);
        pt.sigma = traj.sigma;
      }
    } catch (const std::exception& e) {
      pt.status = std::string("error: ") + e.what();
    }
  };

  workers = std::max(1, workers);
  if (workers == 1 || total <= 1) {
    for (long i = 0; i < total; ++i) solve_point(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<long> next{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (long i = next.fetch_add(1); i < total; i = next.fetch_add(1)) solve_point(i);
      });
    for (auto& th : pool) th.join();
  }
  return result;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

struct OracleResult {
  double objective = -kInf;
  bool feasible_found = false;
  std::vector<ControlPoint> controls;     // per interval
  std::vector<double> x_g;                // per interval (left endpoints)
  std::array<double, 3> sigma{};
  double points_evaluated = 0.0;
};

/// Exhaustively grids every control over its bound box, simulates the same
/// discrete dynamics as the transcription, rejects infeasible points via the
/// node expressions, and keeps the best objective. Capacities are not gridded:
/// the cheapest feasible capacity is the running maximum of the stored amount.
inline OracleResult brute_force_oracle(const HesConfig& config, const Mesh& mesh,
                                       const MeshSignals& ms, double resolution,
                                       double max_points = 1.2e8) {
  if (mesh.n_nodes > 5) throw HesError("oracle: mesh too large (n_nodes > 5)");
  if (!(resolution > 0.0)) throw HesError("oracle: resolution must be positive");
  const long K = mesh.n_intervals();
  const GeneratorSpec& g = config.generator;
  const bool gen_dynamic = g.tau > 0.0;

  // enumerate the control dimensions
  enum Kind { kXg, kUg, kCharge, kDischarge, kSale };
  struct Dim {
    Kind kind;
    long k;
    Domain d;
    double lo;
    long steps;  // values lo + i*resolution, i in [0, steps)
  };
  std::vector<Dim> dims;
  auto add_dim = [&](Kind kind, long k, Domain d, double lo, double hi) {
    const long steps = static_cast<long>(std::floor((hi - lo) / resolution + 1e-9)) + 1;
    dims.push_back({kind, k, d, lo, std::max<long>(1, steps)});
  };
  for (long k = 0; k < K; ++k) {
    if (gen_dynamic) {
      add_dim(kUg, k, P, g.u_g_min, g.u_g_max);
    } else {
      const double lo = std::max(ms.x_g_min[static_cast<size_t>(k)], g.u_g_min);
      const double hi = std::min(ms.x_g_max[static_cast<size_t>(k)], g.u_g_max);
      if (lo > hi) throw HesError("oracle: empty generator bounds");
      add_dim(kXg, k, P, lo, hi);
    }
    for (Domain d : kDomains) {
      const StorageSpec& s = config.storage[d];
      if (!s.enabled) continue;
      if (s.u_in_max > 0.0) add_dim(kCharge, k, d, 0.0, s.u_in_max);
      if (s.u_out_max > 0.0) add_dim(kDischarge, k, d, 0.0, s.u_out_max);
      // Electrical sales are not enumerated: with a single electricity price,
      // selling discharged energy directly or through the grid node earns the
      // same margin, so the split is derived (minimal feasible sale) instead.
      if (s.direct_sale_allowed && s.u_out_max > 0.0 && d != E)
        add_dim(kSale, k, d, 0.0, s.u_out_max);
    }
  }
  double total = 1.0;
  for (const Dim& dim : dims) total *= static_cast<double>(dim.steps);
  if (total > max_points)
    throw HesError("oracle: grid too large (" + format_exact(total) + " points)");

  // per-interval economics and discounting
  std::vector<ProfitCoeffs> pc(static_cast<size_t>(K));
  std::vector<double> w(static_cast<size_t>(K));
  for (long k = 0; k < K; ++k) {
    pc[static_cast<size_t>(k)] = profit_rate_coefficients(config, ms.prices.at(k));
    w[static_cast<size_t>(k)] =
        mesh.h / discount_factor(mesh.time_at(k) - mesh.t0, config.economics.r);
  }
  const CapitalCost cc = capital_cost_affine(
      config.economics,
      {config.storage[0].enabled, config.storage[1].enabled, config.storage[2].enabled});
  const double a_zoh = gen_dynamic ? std::exp(-mesh.h / g.tau) : 0.0;
  const double feas_tol = 1e-9;

  OracleResult best;
  best.points_evaluated = total;
  std::vector<long> idx(dims.size(), 0);
  std::vector<ControlPoint> u(static_cast<size_t>(K));
  std::vector<double> xg(static_cast<size_t>(K), 0.0);

  auto evaluate = [&]() {
    // materialize the point
    for (auto& cp : u) cp = ControlPoint{};
    for (size_t i = 0; i < dims.size(); ++i) {
      const Dim& dim = dims[i];
      const double v = dim.lo + static_cast<double>(idx[i]) * resolution;
      ControlPoint& cp = u[static_cast<size_t>(dim.k)];
      switch (dim.kind) {
        case kXg: xg[static_cast<size_t>(dim.k)] = v; break;
        case kUg: cp.u_g = v; break;
        case kCharge: cp.charge[dim.d] = v; break;
        case kDischarge: cp.discharge[dim.d] = v; break;
        case kSale: cp.sale[dim.d] = v; break;
      }
    }
    // generator state under ZOH
    if (gen_dynamic) {
      double x = g.x0;
      for (long k = 0; k < K; ++k) {
        xg[static_cast<size_t>(k)] = x;
        if (x < ms.x_g_min[static_cast<size_t>(k)] - feas_tol ||
            x > ms.x_g_max[static_cast<size_t>(k)] + feas_tol)
          return;
        x = a_zoh * x + (1.0 - a_zoh) * u[static_cast<size_t>(k)].u_g;
      }
      if (x < ms.x_g_min[static_cast<size_t>(K)] - feas_tol ||
          x > ms.x_g_max[static_cast<size_t>(K)] + feas_tol)
        return;
    }
    // storage states, running capacity, feasibility
    std::array<double, 3> xs{}, cap{};
    for (Domain d : kDomains)
      if (config.storage[d].enabled) {
        xs[d] = config.storage[d].x0;
        cap[d] = std::max(config.storage[d].x0, 0.0);
      }
    for (long k = 0; k < K; ++k) {
      const size_t ks = static_cast<size_t>(k);
      ControlPoint& cp = u[ks];
      if (config.storage[E].enabled && config.storage[E].direct_sale_allowed) {
        // smallest sale keeping the net electric load nonnegative; any larger
        // split is no cheaper and only tightens the downstream nodes
        const StorageSpec& se = config.storage[E];
        const double need = cp.discharge[E] - config.loads.l_e * xg[ks] / se.eta_out;
        cp.sale[E] = std::clamp(need, 0.0, cp.discharge[E]);
      }
      const NodeValues n = eval_nodes(config, xg[ks], cp);
      if (config.storage[P].enabled && cp.charge[P] > n.n1 + feas_tol) return;
      if (config.storage[E].enabled && cp.charge[E] > n.n5 + feas_tol) return;
      if (config.storage[T].enabled && cp.charge[T] > n.n7 + feas_tol) return;
      if (n.l_gp < -feas_tol || n.l_gp > n.n2 + feas_tol) return;
      if (n.l_gpt < -feas_tol || n.l_gpt > n.n3 + feas_tol) return;
      if (n.l_ge < -feas_tol || n.l_ge > n.n5 + feas_tol) return;
      for (Domain d : kDomains) {
        const StorageSpec& s = config.storage[d];
        if (!s.enabled) continue;
        if (cp.sale[d] > cp.discharge[d] + feas_tol) return;
        const double in_rate = (d == T) ? s.eta_in / s.e2h : s.eta_in;
        xs[d] += mesh.h * (in_rate * cp.charge[d] - cp.discharge[d]);
        if (xs[d] < -feas_tol) return;
        cap[d] = std::max(cap[d], xs[d]);
        if (s.sigma_max && cap[d] > *s.sigma_max + feas_tol) return;
      }
    }
    for (Domain d : kDomains)
      if (config.storage[d].enabled && config.storage[d].enforce_terminal &&
          std::abs(xs[d] - config.storage[d].x0) > feas_tol)
        return;
    // capacity-linked cost terms use the final (tight) capacity
    double profit = 0.0;
    for (long k = 0; k < K; ++k)
      profit += w[static_cast<size_t>(k)] *
                pc[static_cast<size_t>(k)].at(xg[static_cast<size_t>(k)], u[static_cast<size_t>(k)], cap);
    const double obj = profit - cc.at(cap);
    if (!best.feasible_found || obj > best.objective) {
      best.feasible_found = true;
      best.objective = obj;
      best.controls = u;
      best.x_g = xg;
      best.sigma = cap;
    }
  };

  // odometer enumeration
  while (true) {
    evaluate();
    size_t i = dims.size();
    while (i > 0) {
      --i;
      if (++idx[i] < dims[i].steps) break;
      idx[i] = 0;
      if (i == 0) return best;
    }
    if (dims.empty()) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// CSV exports
// ---------------------------------------------------------------------------

inline void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "interval,time_h,x_g,u_g";
  for (const char* d : {"P", "E", "T"})
    out << ",x_s_" << d << ",charge_" << d << ",discharge_" << d << ",sale_" << d;
  out << ",grid_power\n";
  const long K = traj.mesh.n_intervals();
  for (long k = 0; k < K; ++k) {
    const size_t ks = static_cast<size_t>(k);
    out << k << ',' << format_exact(traj.mesh.time_at(k)) << ',' << format_exact(traj.x_g[ks])
        << ',' << format_exact(traj.u_g.empty() ? 0.0 : traj.u_g[ks]);
    for (int d = 0; d < 3; ++d) {
      auto get = [ks](const std::vector<double>& v) { return v.empty() ? 0.0 : v[ks]; };
      out << ',' << format_exact(get(traj.x_s[d])) << ',' << format_exact(get(traj.charge[d]))
          << ',' << format_exact(get(traj.discharge[d])) << ','
          << format_exact(get(traj.sale[d]));
    }
    out << ',' << format_exact(traj.grid_power[ks]) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

inline void write_accounting_csv(const EnergyAccounting& acc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "quantity,defined,value\n";
  auto row = [&out](const char* name, bool defined, double v) {
    out << name << ',' << (defined ? 1 : 0) << ',' << format_exact(defined ? v : 0.0) << '\n';
  };
  row("generator_to_grid", acc.generator_defined, acc.frac_grid);
  row("generator_to_charge_P", acc.generator_defined, acc.frac_charge[0]);
  row("generator_to_charge_E", acc.generator_defined, acc.frac_charge[1]);
  row("generator_to_charge_T", acc.generator_defined, acc.frac_charge[2]);
  row("generator_to_primary_load", acc.generator_defined, acc.frac_primary_load);
  row("generator_to_electric_load", acc.generator_defined, acc.frac_electric_load);
  row("primary_load_from_generator", acc.load_defined[0], acc.load_from_generator[0]);
  row("primary_load_from_storage", acc.load_defined[0], acc.load_from_storage[0]);
  row("electric_load_from_generator", acc.load_defined[1], acc.load_from_generator[1]);
  row("electric_load_from_storage", acc.load_defined[1], acc.load_from_storage[1]);
  row("revenue_primary", acc.revenue_defined, acc.rev_frac_primary);
  row("revenue_electric", acc.revenue_defined, acc.rev_frac_electric);
  row("revenue_tertiary", acc.revenue_defined, acc.rev_frac_tertiary);
  row("revenue_storage_share", acc.revenue_defined, acc.rev_storage_share);
  if (!out) throw IoError("failed while writing " + path);
}

inline void write_sweep_csv(const SweepResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& ax : result.axes) out << ax.name << ',';
  out << "status,npv,sigma_P,sigma_E,sigma_T\n";
  for (const auto& pt : result.points) {
    for (double c : pt.coords) out << format_exact(c) << ',';
    out << '"' << pt.status << "\"," << format_exact(pt.npv) << ','
        << format_exact(pt.sigma[0]) << ',' << format_exact(pt.sigma[1]) << ','
        << format_exact(pt.sigma[2]) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

}  // namespace hes
