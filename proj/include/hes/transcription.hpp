#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hes/common.hpp"
#include "hes/economics.hpp"
#include "hes/mesh.hpp"
#include "hes/model.hpp"
#include "hes/solve_report.hpp"

namespace hes {

/// Deterministic column map: states node-major, then controls interval-major,
/// then the trailing capacity columns.
struct VariableLayout {
  long n_nodes = 0;
  bool has_gen_control = false;          // tau > 0
  std::array<bool, 3> enabled{};
  int n_states = 0, n_controls = 0, n_sigma = 0;
  long total = 0;

  int state_off_xg = 0;
  std::array<int, 3> state_off_s{-1, -1, -1};
  int ctrl_off_ug = -1;
  std::array<int, 3> ctrl_off_charge{-1, -1, -1};
  std::array<int, 3> ctrl_off_discharge{-1, -1, -1};
  std::array<int, 3> ctrl_off_sale{-1, -1, -1};
  long ctrl_base = 0, sigma_base = 0;

  long col_xg(long node) const { return node * n_states + state_off_xg; }
  long col_xs(Domain d, long node) const { return node * n_states + state_off_s[d]; }
  long col_ug(long k) const { return ctrl_base + k * n_controls + ctrl_off_ug; }
  long col_charge(Domain d, long k) const { return ctrl_base + k * n_controls + ctrl_off_charge[d]; }
  long col_discharge(Domain d, long k) const {
    return ctrl_base + k * n_controls + ctrl_off_discharge[d];
  }
  long col_sale(Domain d, long k) const { return ctrl_base + k * n_controls + ctrl_off_sale[d]; }
  long col_sigma(Domain d) const {
    int off = 0;
    for (int i = 0; i < d; ++i)
      if (enabled[i]) ++off;
    return sigma_base + off;
  }

  std::string col_name(long col) const {
    if (col >= sigma_base) {
      for (Domain d : kDomains)
        if (enabled[d] && col_sigma(d) == col) return std::string("sigma_") + domain_name(d);
      return "sigma?";
    }
    if (col >= ctrl_base) {
      const long k = (col - ctrl_base) / n_controls;
      const int off = static_cast<int>((col - ctrl_base) % n_controls);
      const std::string idx = "[" + std::to_string(k) + "]";
      if (off == ctrl_off_ug) return "uG" + idx;
      for (Domain d : kDomains) {
        if (off == ctrl_off_charge[d]) return std::string("chg_") + domain_name(d) + idx;
        if (off == ctrl_off_discharge[d]) return std::string("dis_") + domain_name(d) + idx;
        if (off == ctrl_off_sale[d]) return std::string("sale_") + domain_name(d) + idx;
      }
      return "u?" + idx;
    }
    const long node = col / n_states;
    const int off = static_cast<int>(col % n_states);
    const std::string idx = "[" + std::to_string(node) + "]";
    if (off == state_off_xg) return "xG" + idx;
    for (Domain d : kDomains)
      if (off == state_off_s[d]) return std::string("xS_") + domain_name(d) + idx;
    return "x?" + idx;
  }
};

inline VariableLayout index_variables(const HesConfig& config, const Mesh& mesh) {
  VariableLayout L;
  L.n_nodes = mesh.n_nodes;
  L.has_gen_control = config.generator.tau > 0.0;
  for (Domain d : kDomains) L.enabled[d] = config.storage[d].enabled;

  int s = 0;
  L.state_off_xg = s++;
  for (Domain d : kDomains)
    if (L.enabled[d]) L.state_off_s[d] = s++;
  L.n_states = s;

  int u = 0;
  if (L.has_gen_control) L.ctrl_off_ug = u++;
  for (Domain d : kDomains) {
    if (!L.enabled[d]) continue;
    L.ctrl_off_charge[d] = u++;
    L.ctrl_off_discharge[d] = u++;
    L.ctrl_off_sale[d] = u++;
  }
  L.n_controls = u;
  L.n_sigma = static_cast<int>(L.enabled[0]) + L.enabled[1] + L.enabled[2];

  L.ctrl_base = static_cast<long>(L.n_states) * L.n_nodes;
  L.sigma_base = L.ctrl_base + static_cast<long>(L.n_controls) * (L.n_nodes - 1);
  L.total = L.sigma_base + L.n_sigma;
  return L;
}

/// Sparse transcribed linear program (maximization). Every row carries a
/// provenance tag naming the constraint family that produced it.
struct LpProblem {
  struct Row {
    char sense = '<';  // '<' or '='
    double rhs = 0.0;
    std::vector<std::pair<long, double>> terms;  // sorted by column, unique
    std::string tag;
  };

  long n_cols = 0;
  std::vector<double> obj;
  double obj_constant = 0.0;
  std::vector<double> col_lower, col_upper;
  std::vector<Row> rows;
  VariableLayout layout;
  Mesh mesh;
  double objective_scale = 1.0;
  std::vector<double> col_scale;  // empty = identity

  void add_row(char sense, double rhs, std::string tag,
               std::vector<std::pair<long, double>> terms) {
    std::sort(terms.begin(), terms.end());
    std::vector<std::pair<long, double>> merged;
    for (const auto& [c, v] : terms) {
      if (c < 0 || c >= n_cols) throw HesError("row term references unknown column");
      if (!merged.empty() && merged.back().first == c)
        merged.back().second += v;
      else
        merged.emplace_back(c, v);
    }
    std::erase_if(merged, [](const auto& t) { return t.second == 0.0; });
    rows.push_back(Row{sense, rhs, std::move(merged), std::move(tag)});
  }
};

/// Exogenous series evaluated on the mesh.
struct MeshSignals {
  PriceSeries prices;
  std::vector<double> x_g_min, x_g_max;  // per node
};

inline MeshSignals prepare_signals(const HesConfig& config, const SignalSet& signals,
                                   const Mesh& mesh) {
  MeshSignals ms;
  if (signals.price_e.empty()) throw HesError("missing signal: price_e");
  ms.prices.price_e = resample_to_mesh(signals.price_e, mesh);
  if (!signals.price_p.empty()) ms.prices.price_p = resample_to_mesh(signals.price_p, mesh);
  if (!signals.price_t.empty()) ms.prices.price_t = resample_to_mesh(signals.price_t, mesh);
  if (!signals.price_fuel.empty())
    ms.prices.price_fuel = resample_to_mesh(signals.price_fuel, mesh);

  const GeneratorSpec& g = config.generator;
  std::vector<double> avail;
  if (g.x_g_min.from_availability || g.x_g_max.from_availability) {
    if (signals.availability.empty()) throw HesError("missing signal: availability");
    avail = resample_to_mesh(signals.availability, mesh);
  }
  ms.x_g_min.resize(static_cast<size_t>(mesh.n_nodes));
  ms.x_g_max.resize(static_cast<size_t>(mesh.n_nodes));
  for (long n = 0; n < mesh.n_nodes; ++n) {
    const size_t i = static_cast<size_t>(n);
    ms.x_g_min[i] = g.x_g_min.from_availability ? avail[i] : g.x_g_min.value;
    ms.x_g_max[i] = g.x_g_max.from_availability ? avail[i] : g.x_g_max.value;
  }
  return ms;
}

namespace detail {

/// Coefficients of an affine node expression over one interval's variables,
/// obtained by evaluating eval_nodes at unit inputs.
struct NodeLin {
  double x_g = 0.0;
  std::array<double, 3> charge{}, discharge{}, sale{};
};

template <typename Pick>
NodeLin node_linearization(const HesConfig& c, Pick&& pick) {
  NodeLin lin;
  const ControlPoint zero;
  lin.x_g = pick(eval_nodes(c, 1.0, zero));
  for (Domain d : kDomains) {
    if (!c.storage[d].enabled) continue;
    ControlPoint u;
    u.charge[d] = 1.0;
    lin.charge[d] = pick(eval_nodes(c, 0.0, u));
    u = ControlPoint{};
    u.discharge[d] = 1.0;
    lin.discharge[d] = pick(eval_nodes(c, 0.0, u));
    u = ControlPoint{};
    u.sale[d] = 1.0;
    lin.sale[d] = pick(eval_nodes(c, 0.0, u));
  }
  return lin;
}

inline void append_scaled(std::vector<std::pair<long, double>>& terms, const NodeLin& lin,
                          const VariableLayout& L, long k, double factor) {
  if (lin.x_g != 0.0) terms.emplace_back(L.col_xg(k), factor * lin.x_g);
  for (Domain d : kDomains) {
    if (!L.enabled[d]) continue;
    if (lin.charge[d] != 0.0) terms.emplace_back(L.col_charge(d, k), factor * lin.charge[d]);
    if (lin.discharge[d] != 0.0)
      terms.emplace_back(L.col_discharge(d, k), factor * lin.discharge[d]);
    if (lin.sale[d] != 0.0) terms.emplace_back(L.col_sale(d, k), factor * lin.sale[d]);
  }
}

}  // namespace detail

/// Direct transcription of a validated configuration into a sparse LP.
inline LpProblem assemble_lp(const HesConfig& config, const Mesh& mesh, const MeshSignals& ms) {
  const VariableLayout L = index_variables(config, mesh);
  const long K = mesh.n_intervals();
  const GeneratorSpec& g = config.generator;

  LpProblem lp;
  lp.layout = L;
  lp.mesh = mesh;
  lp.n_cols = L.total;
  lp.obj.assign(static_cast<size_t>(L.total), 0.0);
  lp.col_lower.assign(static_cast<size_t>(L.total), 0.0);
  lp.col_upper.assign(static_cast<size_t>(L.total), kInf);

  // --- column bounds ---
  for (long n = 0; n < mesh.n_nodes; ++n) {
    double lo = ms.x_g_min[static_cast<size_t>(n)];
    double hi = ms.x_g_max[static_cast<size_t>(n)];
    if (!L.has_gen_control) {  // the request collapses onto the state
      lo = std::max(lo, g.u_g_min);
      hi = std::min(hi, g.u_g_max);
    }
    lp.col_lower[static_cast<size_t>(L.col_xg(n))] = lo;
    lp.col_upper[static_cast<size_t>(L.col_xg(n))] = hi;
    for (Domain d : kDomains)
      if (L.enabled[d]) {
        lp.col_lower[static_cast<size_t>(L.col_xs(d, n))] = 0.0;
        lp.col_upper[static_cast<size_t>(L.col_xs(d, n))] = kInf;
      }
  }
  for (long k = 0; k < K; ++k) {
    if (L.has_gen_control) {
      lp.col_lower[static_cast<size_t>(L.col_ug(k))] = g.u_g_min;
      lp.col_upper[static_cast<size_t>(L.col_ug(k))] = g.u_g_max;
    }
    for (Domain d : kDomains) {
      if (!L.enabled[d]) continue;
      const StorageSpec& s = config.storage[d];
      lp.col_upper[static_cast<size_t>(L.col_charge(d, k))] = s.u_in_max;
      lp.col_upper[static_cast<size_t>(L.col_discharge(d, k))] = s.u_out_max;
      lp.col_upper[static_cast<size_t>(L.col_sale(d, k))] =
          s.direct_sale_allowed ? s.u_out_max : 0.0;
    }
  }
  for (Domain d : kDomains)
    if (L.enabled[d] && config.storage[d].sigma_max)
      lp.col_upper[static_cast<size_t>(L.col_sigma(d))] = *config.storage[d].sigma_max;

  // --- generator dynamics: exact zero-order hold ---
  if (L.has_gen_control) {
    const double a = std::exp(-mesh.h / g.tau);
    for (long k = 0; k < K; ++k)
      lp.add_row('=', 0.0, "generator-dynamics[" + std::to_string(k) + "]",
                 {{L.col_xg(k + 1), 1.0}, {L.col_xg(k), -a}, {L.col_ug(k), -(1.0 - a)}});
  }

  // --- storage dynamics ---
  for (Domain d : kDomains) {
    if (!L.enabled[d]) continue;
    const StorageSpec& s = config.storage[d];
    const double in_rate = (d == T) ? s.eta_in / s.e2h : s.eta_in;
    for (long k = 0; k < K; ++k)
      lp.add_row('=', 0.0,
                 std::string("storage-dynamics-") + domain_name(d) + "[" + std::to_string(k) + "]",
                 {{L.col_xs(d, k + 1), 1.0},
                  {L.col_xs(d, k), -1.0},
                  {L.col_charge(d, k), -mesh.h * in_rate},
                  {L.col_discharge(d, k), mesh.h}});
  }

  // --- sale never exceeds discharge ---
  for (Domain d : kDomains) {
    if (!L.enabled[d]) continue;
    for (long k = 0; k < K; ++k)
      lp.add_row('<', 0.0,
                 std::string("sale-le-discharge-") + domain_name(d) + "[" + std::to_string(k) + "]",
                 {{L.col_sale(d, k), 1.0}, {L.col_discharge(d, k), -1.0}});
  }

  // --- stored amount never exceeds capacity ---
  for (Domain d : kDomains) {
    if (!L.enabled[d]) continue;
    for (long n = 0; n < mesh.n_nodes; ++n)
      lp.add_row('<', 0.0,
                 std::string("state-capacity-") + domain_name(d) + "[" + std::to_string(n) + "]",
                 {{L.col_xs(d, n), 1.0}, {L.col_sigma(d), -1.0}});
  }

  // --- boundary conditions ---
  if (L.has_gen_control)
    lp.add_row('=', g.x0, "initial-state-G", {{L.col_xg(0), 1.0}});
  for (Domain d : kDomains) {
    if (!L.enabled[d]) continue;
    lp.add_row('=', config.storage[d].x0, std::string("initial-state-") + domain_name(d),
               {{L.col_xs(d, 0), 1.0}});
    if (config.storage[d].enforce_terminal)
      lp.add_row('=', 0.0, std::string("terminal-state-") + domain_name(d),
                 {{L.col_xs(d, mesh.n_nodes - 1), 1.0}, {L.col_xs(d, 0), -1.0}});
  }

  // --- node constraints at interval left endpoints ---
  using detail::node_linearization;
  const auto lin_n1 = node_linearization(config, [](const NodeValues& n) { return n.n1; });
  const auto lin_n2 = node_linearization(config, [](const NodeValues& n) { return n.n2; });
  const auto lin_n3 = node_linearization(config, [](const NodeValues& n) { return n.n3; });
  const auto lin_n5 = node_linearization(config, [](const NodeValues& n) { return n.n5; });
  const auto lin_n7 = node_linearization(config, [](const NodeValues& n) { return n.n7; });
  const auto lin_gp = node_linearization(config, [](const NodeValues& n) { return n.l_gp; });
  const auto lin_gpt = node_linearization(config, [](const NodeValues& n) { return n.l_gpt; });
  const auto lin_ge = node_linearization(config, [](const NodeValues& n) { return n.l_ge; });

  const bool emit_gp = config.loads.l_p > 0.0 || L.enabled[P];
  const bool emit_gpt = L.enabled[T] && config.loads.l_pt > 0.0;
  const bool emit_ge = config.loads.l_e > 0.0 || L.enabled[E];

  for (long k = 0; k < K; ++k) {
    const std::string ki = "[" + std::to_string(k) + "]";
    auto charge_row = [&](Domain d, const detail::NodeLin& lin) {
      std::vector<std::pair<long, double>> terms{{L.col_charge(d, k), 1.0}};
      detail::append_scaled(terms, lin, L, k, -1.0);
      lp.add_row('<', 0.0, std::string("charge-availability-") + domain_name(d) + ki,
                 std::move(terms));
    };
    if (L.enabled[P]) charge_row(P, lin_n1);
    if (L.enabled[E]) charge_row(E, lin_n5);
    if (L.enabled[T]) charge_row(T, lin_n7);

    auto load_rows = [&](const char* name, const detail::NodeLin& load,
                         const detail::NodeLin& node) {
      std::vector<std::pair<long, double>> lo;
      detail::append_scaled(lo, load, L, k, -1.0);
      lp.add_row('<', 0.0, std::string("load-nonneg-") + name + ki, std::move(lo));
      std::vector<std::pair<long, double>> hi;
      detail::append_scaled(hi, load, L, k, 1.0);
      detail::append_scaled(hi, node, L, k, -1.0);
      lp.add_row('<', 0.0, std::string("load-avail-") + name + ki, std::move(hi));
    };
    if (emit_gp) load_rows("gp", lin_gp, lin_n2);
    if (emit_gpt) load_rows("gpt", lin_gpt, lin_n3);
    if (emit_ge) load_rows("ge", lin_ge, lin_n5);
  }

  // --- objective: discounted profit quadrature minus capital ---
  const CapitalCost cc = capital_cost_affine(
      config.economics, {L.enabled[0], L.enabled[1], L.enabled[2]});
  lp.obj_constant -= cc.constant;
  for (Domain d : kDomains)
    if (L.enabled[d]) lp.obj[static_cast<size_t>(L.col_sigma(d))] -= cc.sigma[d];
  for (long k = 0; k < K; ++k) {
    const double w =
        mesh.h / discount_factor(mesh.time_at(k) - mesh.t0, config.economics.r);
    const ProfitCoeffs pc = profit_rate_coefficients(config, ms.prices.at(k));
    lp.obj[static_cast<size_t>(L.col_xg(k))] += w * pc.x_g;
    lp.obj_constant += w * pc.constant;
    for (Domain d : kDomains) {
      if (!L.enabled[d]) continue;
      lp.obj[static_cast<size_t>(L.col_charge(d, k))] += w * pc.charge[d];
      lp.obj[static_cast<size_t>(L.col_discharge(d, k))] += w * pc.discharge[d];
      lp.obj[static_cast<size_t>(L.col_sale(d, k))] += w * pc.sale[d];
      lp.obj[static_cast<size_t>(L.col_sigma(d))] += w * pc.sigma[d];
    }
  }
  return lp;
}

/// Applies peak-demand and sale-window rules, then literal overrides.
inline LpProblem apply_scenario_overlay(const LpProblem& lp, const ScenarioOverlay& overlay,
                                        const Mesh& mesh) {
  LpProblem out = lp;
  if (overlay.empty()) return out;
  const VariableLayout& L = lp.layout;
  auto hour_of_day = [](double t) { return static_cast<int>(std::floor(std::fmod(t, 24.0))); };
  auto in_set = [](const std::vector<int>& set, int h) {
    return std::find(set.begin(), set.end(), h) != set.end();
  };

  if (!overlay.peak_hours.empty()) {
    for (long n = 0; n < mesh.n_nodes; ++n)
      if (in_set(overlay.peak_hours, hour_of_day(mesh.time_at(n))))
        out.col_lower[static_cast<size_t>(L.col_xg(n))] =
            out.col_upper[static_cast<size_t>(L.col_xg(n))];
    for (long k = 0; k < mesh.n_intervals(); ++k)
      if (in_set(overlay.peak_hours, hour_of_day(mesh.time_at(k))))
        for (Domain d : kDomains)
          if (L.enabled[d]) out.col_upper[static_cast<size_t>(L.col_charge(d, k))] = 0.0;
  }

  for (Domain d : kDomains) {
    if (!L.enabled[d] || !overlay.sale_hours[d]) continue;
    for (long k = 0; k < mesh.n_intervals(); ++k) {
      const bool open = in_set(*overlay.sale_hours[d], hour_of_day(mesh.time_at(k)));
      out.col_upper[static_cast<size_t>(L.col_sale(d, k))] =
          open ? out.col_upper[static_cast<size_t>(L.col_discharge(d, k))] : 0.0;
    }
  }

  for (const BoundOverride& ov : overlay.overrides) {
    const double t = static_cast<double>(ov.hour);
    const double pos = (t - mesh.t0) / mesh.h;
    const long k = static_cast<long>(std::llround(pos));
    if (std::abs(pos - static_cast<double>(k)) > 1e-9 || k < 0 || k >= mesh.n_nodes)
      throw HesError("override hour " + std::to_string(ov.hour) + " is off the mesh");
    long col = -1;
    if (ov.kind == "x_g") col = L.col_xg(k);
    else if (ov.kind == "u_g" && L.has_gen_control && k < mesh.n_intervals()) col = L.col_ug(k);
    else {
      for (Domain d : kDomains) {
        if (!L.enabled[d] || k >= mesh.n_intervals()) continue;
        const std::string dn = domain_name(d);
        if (ov.kind == "charge_" + dn) col = L.col_charge(d, k);
        else if (ov.kind == "discharge_" + dn) col = L.col_discharge(d, k);
        else if (ov.kind == "sale_" + dn) col = L.col_sale(d, k);
      }
    }
    if (col < 0) throw HesError("override kind '" + ov.kind + "' not present in this layout");
    out.col_lower[static_cast<size_t>(col)] = ov.lower;
    out.col_upper[static_cast<size_t>(col)] = ov.upper;
  }

  for (long c = 0; c < out.n_cols; ++c)
    if (out.col_lower[static_cast<size_t>(c)] > out.col_upper[static_cast<size_t>(c)] + 1e-12) {
      const long node = c < L.ctrl_base ? c / L.n_states
                                        : (c - L.ctrl_base) / std::max(1, L.n_controls);
      throw HesError("overlay induces empty bounds on " + L.col_name(c) + " (hour " +
                     std::to_string(static_cast<long>(mesh.time_at(node))) + ")");
    }
  return out;
}

/// Multiplies the objective (and optionally substitutes per-column units) and
/// records the factors so unscale_solution is exact.
inline LpProblem scale_lp(const LpProblem& lp, double objective_scale,
                          const std::vector<double>& column_scales = {}) {
  if (!(objective_scale > 0.0) || !std::isfinite(objective_scale))
    throw HesError("scale_lp: objective scale must be positive and finite");
  LpProblem out = lp;
  for (double& v : out.obj) v *= objective_scale;
  out.obj_constant *= objective_scale;
  out.objective_scale = lp.objective_scale * objective_scale;

  if (!column_scales.empty()) {
    if (static_cast<long>(column_scales.size()) != lp.n_cols)
      throw HesError("scale_lp: column scale length mismatch");
    for (double s : column_scales)
      if (!(s > 0.0) || !std::isfinite(s)) throw HesError("scale_lp: bad column scale");
    out.col_scale.assign(static_cast<size_t>(lp.n_cols), 1.0);
    if (!lp.col_scale.empty()) out.col_scale = lp.col_scale;
    for (long c = 0; c < lp.n_cols; ++c) {
      const size_t i = static_cast<size_t>(c);
      const double s = column_scales[i];
      out.col_scale[i] *= s;
      out.obj[i] *= s;
      out.col_lower[i] = lp.col_lower[i] / s;
      out.col_upper[i] = lp.col_upper[i] / s;
    }
    for (auto& row : out.rows)
      for (auto& [c, v] : row.terms) v *= column_scales[static_cast<size_t>(c)];
  }
  return out;
}

/// Maps a report on a scaled problem back to original units.
inline SolveReport unscale_solution(const SolveReport& report, const LpProblem& lp) {
  const bool col_scaled = !lp.col_scale.empty();
  if (lp.objective_scale == 1.0 && !col_scaled) return report;
  SolveReport out = report;
  const double os = lp.objective_scale;
  if (os <= 0.0) throw HesError("unscale_solution: scaling metadata missing");
  out.objective = report.objective / os;
  for (size_t j = 0; j < out.primal.size(); ++j)
    if (col_scaled) out.primal[j] *= lp.col_scale[j];
  for (double& d : out.row_dual) d /= os;
  for (size_t j = 0; j < out.reduced_cost.size(); ++j) {
    out.reduced_cost[j] /= os;
    if (col_scaled) out.reduced_cost[j] /= lp.col_scale[j];
  }
  out.duality_gap /= os;
  out.max_dual_residual /= os;
  out.complementarity_residual /= os;
  return out;
}

}  // namespace hes
