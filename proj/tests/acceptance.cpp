// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Expected values are pinned from independent derivations
// (closed forms, fine RK4 integration, exhaustive grid search, and an
// external LP solver), not from the code under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/instances.hpp"

using namespace hes;

namespace {

int g_failures = 0;

void report(int id, const char* what, bool pass, const std::string& detail = "") {
  std::printf("%s criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, what,
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::filesystem::path work_dir() {
  const std::filesystem::path dir = std::filesystem::path(HES_BINARY_DIR) / "acceptance_tmp";
  std::filesystem::create_directories(dir);
  return dir;
}

// --- criterion 1: the generator discretization is exact, not approximate ----
// ZOH step x+ = a x + (1-a) u, a = exp(-h/tau), checked against 40000-step
// RK4 integration of tau x' = u - x to 1e-12.
void criterion_zoh() {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> utau(0.5, 2.0), uh(0.25, 1.0), ux(0.0, 100.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double tau = utau(rng), h = uh(rng), x0 = ux(rng), u = ux(rng);
    const double a = std::exp(-h / tau);
    const double zoh = a * x0 + (1.0 - a) * u;
    double x = x0;
    const long n = 40000;
    const double s = h / static_cast<double>(n);
    auto f = [&](double xv) { return (u - xv) / tau; };
    for (long i = 0; i < n; ++i) {
      const double k1 = f(x);
      const double k2 = f(x + 0.5 * s * k1);
      const double k3 = f(x + 0.5 * s * k2);
      const double k4 = f(x + s * k3);
      x += (s / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    worst = std::max(worst, std::abs(zoh - x) / (1.0 + std::abs(x)));
  }
  // the assembled dynamics rows carry the same exponential coefficient
  HesConfig c = hestest::arbitrage_config();
  c.generator.tau = 0.1389;
  const Mesh mesh = build_mesh(0.0, 2.0, 1.0);
  const MeshSignals ms = prepare_signals(c, hestest::arbitrage_signals(), mesh);
  const LpProblem lp = assemble_lp(c, mesh, ms);
  const double a = std::exp(-1.0 / 0.1389);
  bool row_exact = false;
  for (const auto& row : lp.rows)
    if (row.tag == "generator-dynamics[0]")
      for (const auto& [col, v] : row.terms)
        if (col == lp.layout.col_xg(0)) row_exact = v == -a;
  report(1, "zero-order-hold generator dynamics are exact (RK4 cross-check, 1e-12)",
         worst <= 1e-12 && row_exact, "max rel dev " + format_exact(worst));
}

// --- criterion 2: solver vs exhaustive grid search --------------------------
void criterion_oracle() {
  bool pass = true;
  std::string detail;

  // the two-interval arbitrage economy has a hand-checkable optimum of 100 $
  {
    const HesConfig c = hestest::arbitrage_config(true, true);
    const Mesh mesh = build_mesh(0.0, 2.0, 1.0);
    const MeshSignals ms = prepare_signals(c, hestest::arbitrage_signals(), mesh);
    const OracleResult oracle = brute_force_oracle(c, mesh, ms, 0.01);
    auto [rep, lp] = solve_config(hestest::arbitrage_config(true), hestest::arbitrage_signals(),
                                  1e-9, 1.0);
    if (!(oracle.feasible_found && std::abs(oracle.objective - 100.0) <= 1e-9 &&
          rep.status == SolveStatus::Optimal && std::abs(rep.objective - 100.0) <= 1e-9)) {
      pass = false;
      detail = "arbitrage lp=" + format_exact(rep.objective) +
               " oracle=" + format_exact(oracle.objective);
    }
  }

  std::mt19937 rng(2);
  for (int trial = 0; pass && trial < 20; ++trial) {
    auto [config, signals] = hestest::random_oracle_instance(rng);
    const Mesh mesh = build_mesh(config.horizon.t0, config.horizon.tf, config.horizon.h);
    const MeshSignals ms = prepare_signals(config, signals, mesh);
    const OracleResult oracle = brute_force_oracle(config, mesh, ms, 0.01);
    auto [rep, lp] = solve_config(config, signals, 1e-9, 1.0);
    if (rep.status != SolveStatus::Optimal || !oracle.feasible_found) {
      pass = false;
      detail = "trial " + std::to_string(trial) + ": no optimum";
      break;
    }
    // the LP can never fall below the best grid point; on this grid-aligned
    // family the optimum is itself a grid point, so agreement is exact
    if (rep.objective < oracle.objective - 1e-9 ||
        rep.objective - oracle.objective > 1e-7) {
      pass = false;
      detail = "trial " + std::to_string(trial) + " lp=" + format_exact(rep.objective) +
               " oracle=" + format_exact(oracle.objective);
    }
  }
  report(2, "LP optimum matches exhaustive 0.01-grid search (arbitrage + 20 random)", pass,
         detail);
}

// --- criterion 3: every solve carries a verifiable optimality certificate ---
void criterion_certificates() {
  std::mt19937 rng(3);
  int certified = 0;
  std::string detail;
  for (int trial = 0; trial < 100; ++trial) {
    auto [config, signals] = hestest::random_instance(rng);
    // certify at unit objective scale so dual roundoff is not amplified by
    // the unscaling step
    auto [rep, lp] = solve_config(config, signals, 1e-9, 1.0);
    if (rep.status != SolveStatus::Optimal) {
      detail = "trial " + std::to_string(trial) + ": " + to_string(rep.status);
      break;
    }
    const OptimalityCertificate cert = verify_optimality(lp, rep, 1e-8);
    if (!cert.pass) {
      detail = "trial " + std::to_string(trial) + ": " + cert.first_violation +
               " gap=" + format_exact(cert.gap);
      break;
    }
    ++certified;
  }
  report(3, "100/100 random instances pass the 1e-8 optimality certificate", certified == 100,
         detail.empty() ? "certified " + std::to_string(certified) : detail);
}

// --- criterion 4: techno-economic primitives match hand-derived values ------
void criterion_economics() {
  bool pass = true;
  std::string detail;
  auto check = [&](const char* name, double got, double want, double tol) {
    if (std::abs(got - want) > tol) {
      pass = false;
      detail += std::string(name) + " got " + format_exact(got) + " want " + format_exact(want) +
                "; ";
    }
  };
  check("idc(0.075,3)", idc_factor(0.075, 3.0), 0.1209375, 1e-12);
  check("idc(0.075,7)", idc_factor(0.075, 7.0), 0.3084375, 1e-12);
  check("discount(2yr,0.075)", discount_factor(2.0 * 8766.0, 0.075), 1.155625, 1e-12);
  TurbineSpec t;
  check("turbine(8m/s)", turbine_power(8.0, t), 2.1167, 3e-3);
  check("turbine(12m/s)", turbine_power(12.0, t), 2.8, 0.0);
  check("turbine(26m/s)", turbine_power(26.0, t), 0.0, 0.0);
  const EconomicParams ec = [] {
    EconomicParams e;
    e.c_occ[P] = 1048947.0;
    e.r = 0.075;
    e.t_con = 3.0;
    return e;
  }();
  check("capital(237.53 MWh)", capital_cost_affine(ec, {true, false, false}).at({237.53, 0, 0}),
        2.7929e8, 3e5);
  report(4, "IDC, discounting, turbine curve, and capital cost match pinned values", pass,
         detail);
}

// --- criterion 5: demand-following obligations never increase the optimum ---
void criterion_peak_window() {
  const HesConfig base = hestest::week_thermal_config();
  const SignalSet signals = hestest::week_signals();
  std::vector<SweepAxis> axes{{"scenario.peak_window", {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}}};
  const SweepResult sr = run_sweep(base, signals, axes);
  bool pass = true;
  std::string detail = "npv:";
  double prev = kInf;
  for (const SweepPoint& pt : sr.points) {
    if (pt.status != "optimal") {
      pass = false;
      detail += " [" + pt.status + "]";
      continue;
    }
    if (pt.npv > prev + 1e-6 * (1.0 + std::abs(prev))) pass = false;
    prev = pt.npv;
    detail += " " + format_exact(pt.npv);
  }
  // a longer window binds strictly here: the forced hours include prices
  // below the marginal generation cost
  if (pass && !(sr.points.back().npv < sr.points.front().npv - 1e-6)) pass = false;
  report(5, "week-long NPV is non-increasing in the forced peak-window length", pass, detail);
}

// --- criterion 6: storage is built only when its capital cost clears --------
void criterion_wind_occ() {
  const HesConfig base = hestest::week_wind_config();
  const SignalSet signals = hestest::wind_signals();
  const double ref = base.economics.c_occ[E];
  std::vector<SweepAxis> axes{{"economics.c_occ_e", {0.5 * ref, 0.75 * ref, 1.0 * ref}}};
  const SweepResult sr = run_sweep(base, signals, axes);
  bool pass = true;
  std::string detail = "sigma_E:";
  double prev = kInf;
  for (const SweepPoint& pt : sr.points) {
    if (pt.status != "optimal") pass = false;
    if (pt.sigma[E] > prev + 1e-7) pass = false;
    prev = pt.sigma[E];
    detail += " " + format_exact(pt.sigma[E]);
  }
  if (!(sr.points.front().sigma[E] > 1e-6)) pass = false;     // cheap storage is built
  if (!(sr.points.back().sigma[E] <= 1e-6)) pass = false;     // expensive storage is not
  report(6, "wind-farm battery capacity decreases with overnight cost and hits zero", pass,
         detail);
}

// --- criterion 7: solved trajectories satisfy the physical invariants -------
void criterion_invariants() {
  std::mt19937 rng(7);
  bool pass = true;
  std::string detail;
  const double tol = 1e-6;
  for (int trial = 0; pass && trial < 10; ++trial) {
    auto [config, signals] = hestest::random_instance(rng, 15);
    auto [rep, lp] = solve_config(config, signals);
    if (rep.status != SolveStatus::Optimal) {
      pass = false;
      detail = "trial " + std::to_string(trial) + ": " + to_string(rep.status);
      break;
    }
    const Trajectory traj = extract_trajectory(rep, lp, config);
    const MeshSignals ms = prepare_signals(config, signals, lp.mesh);
    auto fail = [&](const std::string& what) {
      pass = false;
      detail = "trial " + std::to_string(trial) + ": " + what;
    };
    const long K = lp.mesh.n_intervals();
    for (Domain d : kDomains) {
      if (!config.storage[d].enabled) continue;
      for (long n = 0; n <= K && pass; ++n) {
        const double xs = traj.x_s[d][static_cast<size_t>(n)];
        if (xs < -tol) fail("negative stored amount");
        if (xs > traj.sigma[d] + tol) fail("stored amount above capacity");
      }
      for (long k = 0; k < K && pass; ++k)
        if (traj.sale[d][static_cast<size_t>(k)] >
            traj.discharge[d][static_cast<size_t>(k)] + tol)
          fail("sale exceeds discharge");
      if (pass && config.storage[d].enforce_terminal &&
          std::abs(traj.x_s[d][static_cast<size_t>(K)] - traj.x_s[d][0]) > tol)
        fail("terminal state not restored");
    }
    for (long k = 0; k < K && pass; ++k) {
      const NodeValues& n = traj.nodes[static_cast<size_t>(k)];
      const ControlPoint u = traj.control_at(k);
      if (config.storage[P].enabled && u.charge[P] > n.n1 + tol) fail("charge_P above n1");
      if (config.storage[E].enabled && u.charge[E] > n.n5 + tol) fail("charge_E above n5");
      if (config.storage[T].enabled && u.charge[T] > n.n7 + tol) fail("charge_T above n7");
      if (n.l_gp < -tol || n.l_gp > n.n2 + tol) fail("primary load outside [0, n2]");
      if (n.l_ge < -tol || n.l_ge > n.n5 + tol) fail("electric load outside [0, n5]");
      const double xlo = ms.x_g_min[static_cast<size_t>(k)];
      const double xhi = ms.x_g_max[static_cast<size_t>(k)];
      const double xg = traj.x_g[static_cast<size_t>(k)];
      if (xg < xlo - tol || xg > xhi + tol) fail("generator level outside its band");
    }
    if (pass) {
      const NpvBreakdown b = npv_breakdown(traj, config, ms.prices);
      if (!nearly_equal(b.npv, rep.objective, 1e-6)) fail("NPV does not match the objective");
    }
  }
  report(7, "10/10 solved random instances satisfy the trajectory invariants", pass, detail);
}

// --- criterion 8: objective scaling does not move the optimum ---------------
void criterion_scaling() {
  std::mt19937 rng(8);
  bool pass = true;
  std::string detail;
  for (int trial = 0; pass && trial < 20; ++trial) {
    auto [config, signals] = hestest::random_instance(rng, 15);
    auto [scaled, lp1] = solve_config(config, signals, 1e-9, 1e-9);
    auto [unit, lp2] = solve_config(config, signals, 1e-9, 1.0);
    if (scaled.status != SolveStatus::Optimal || unit.status != SolveStatus::Optimal) {
      pass = false;
      detail = "trial " + std::to_string(trial) + ": not optimal";
      break;
    }
    if (!nearly_equal(scaled.objective, unit.objective, 1e-6)) {
      pass = false;
      detail = "trial " + std::to_string(trial) + ": " + format_exact(scaled.objective) +
               " vs " + format_exact(unit.objective);
    }
  }
  report(8, "1e-9-scaled and unscaled objectives agree to 1e-6 on 20 instances", pass, detail);
}

// --- criterion 9: year-scale interchange with an external solver ------------
void criterion_external() {
  HesConfig config = hestest::week_thermal_config();
  config.horizon = {0.0, 8760.0, 1.0};
  SignalSet signals = hestest::week_signals();
  signals.price_e = periodic_extend(signals.price_e, 53);
  signals.price_fuel = periodic_extend(signals.price_fuel, 53);

  const auto t0 = std::chrono::steady_clock::now();
  const Mesh mesh = build_mesh(config.horizon.t0, config.horizon.tf, config.horizon.h);
  const MeshSignals ms = prepare_signals(config, signals, mesh);
  const LpProblem lp = assemble_lp(config, mesh, ms);
  const double assemble_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  bool pass = mesh.n_nodes == 8761 && assemble_s < 5.0;
  std::string detail = "assembled " + std::to_string(lp.rows.size()) + " rows in " +
                       format_exact(assemble_s) + " s";
  if (pass) {
    const auto dir = work_dir();
    const std::string mps = (dir / "year.mps").string();
    const std::string names = (dir / "year_names.csv").string();
    const std::string sol = (dir / "year.sol").string();
    export_mps(lp, mps, names);

    // coefficient-exact round trip through the interchange format
    const LpProblem back = import_mps(mps);
    bool exact = back.n_cols == lp.n_cols && back.obj == lp.obj &&
                 back.obj_constant == lp.obj_constant && back.col_lower == lp.col_lower &&
                 back.col_upper == lp.col_upper && back.rows.size() == lp.rows.size();
    for (size_t i = 0; exact && i < lp.rows.size(); ++i)
      exact = back.rows[i].sense == lp.rows[i].sense && back.rows[i].rhs == lp.rows[i].rhs &&
              back.rows[i].terms == lp.rows[i].terms;
    if (!exact) {
      pass = false;
      detail += "; MPS round trip not coefficient-exact";
    } else {
      const std::string cmd = "python3 " + std::string(HES_SOURCE_DIR) +
                              "/tools/solve_mps.py " + mps + " " + names + " " + sol +
                              " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        pass = false;
        detail += "; external solver invocation failed";
      } else {
        const SolveReport ext = import_external_solution(lp, sol, names);
        detail += "; external objective " + format_exact(ext.objective);
        if (ext.status != SolveStatus::FeasibleUnverified) {
          pass = false;
          detail += "; reimport status " + std::string(to_string(ext.status)) + " (" +
                    ext.diagnostic + ")";
        }
      }
    }
  }
  report(9, "8761-node year assembles <5 s, round-trips MPS exactly, external solve reimports",
         pass, detail);
}

// --- criterion 10: sale windows confine direct sales ------------------------
void criterion_sale_window() {
  const HesConfig config = hestest::h2_config();
  const SignalSet signals = hestest::h2_signals();
  auto [rep, lp] = solve_config(config, signals);
  bool pass = rep.status == SolveStatus::Optimal;
  std::string detail = pass ? "" : to_string(rep.status);
  if (pass) {
    const Trajectory traj = extract_trajectory(rep, lp, config);
    double inside = 0.0;
    for (long k = 0; k < lp.mesh.n_intervals(); ++k) {
      const int hod = static_cast<int>(std::fmod(lp.mesh.time_at(k), 24.0));
      const double s = traj.sale[T][static_cast<size_t>(k)];
      if (hod == 8)
        inside += s;
      else if (s > 1e-9) {
        pass = false;
        detail = "sale at hour-of-day " + std::to_string(hod);
      }
    }
    if (pass && !(inside > 1e-6)) {
      pass = false;
      detail = "window never used";
    }
    if (pass) detail = "sold " + format_exact(inside) + " kg across the three windows";
  }
  report(10, "hydrogen direct sales occur only inside the daily 8:00 window", pass, detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_zoh();
  criterion_oracle();
  criterion_certificates();
  criterion_economics();
  criterion_peak_window();
  criterion_wind_occ();
  criterion_invariants();
  criterion_scaling();
  criterion_external();
  criterion_sale_window();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
