#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "hes/common.hpp"
#include "hes/model.hpp"
#include "hes/trajectory.hpp"

namespace hes {

/// Interest-during-construction loading on overnight capital cost.
inline double idc_factor(double r, double t_con) {
  if (r < 0.0 || t_con < 0.0) throw HesError("idc_factor: negative argument");
  return (r / 2.0) * t_con + (r * r / 6.0) * t_con * t_con;
}

/// Annualized discounting: (1+r)^(whole years since t0).
inline double discount_factor(double t_hours, double r) {
  if (t_hours < 0.0) throw HesError("discount_factor: negative time");
  return std::pow(1.0 + r, std::floor(t_hours / kHoursPerYear));
}

/// Capital cost as an affine form in the storage capacities.
struct CapitalCost {
  double constant = 0.0;              // generator share [$]
  std::array<double, 3> sigma{};      // per-capacity coefficients [$/MWh or $/kg]

  double at(const std::array<double, 3>& capacities) const {
    double v = constant;
    for (int d = 0; d < 3; ++d) v += sigma[d] * capacities[d];
    return v;
  }
};

inline CapitalCost capital_cost_affine(const EconomicParams& params,
                                       const std::array<bool, 3>& storage_enabled) {
  const double loading = 1.0 + idc_factor(params.r, params.t_con);
  CapitalCost cc;
  cc.constant = params.c_occ_g * loading;
  for (int d = 0; d < 3; ++d)
    if (storage_enabled[d]) cc.sigma[d] = params.c_occ[d] * loading;
  return cc;
}

struct PriceSample {
  double e = 0.0;     // [$/MWh]
  double p = 0.0;     // [$/MWh]
  double t = 0.0;     // [$/kg]
  double fuel = 0.0;  // [$/kg-fuel]
};

/// Prices resampled onto the mesh (index = node / interval left endpoint).
struct PriceSeries {
  std::vector<double> price_e, price_p, price_t, price_fuel;

  PriceSample at(long k) const {
    PriceSample s;
    auto pick = [k](const std::vector<double>& v) {
      return v.empty() ? 0.0 : v[static_cast<size_t>(k)];
    };
    s.e = pick(price_e);
    s.p = pick(price_p);
    s.t = pick(price_t);
    s.fuel = pick(price_fuel);
    return s;
  }
};

/// $/h coefficients of the instantaneous profit rate, linear in the states,
/// controls, and capacities of one interval.
struct ProfitCoeffs {
  double x_g = 0.0;
  std::array<double, 3> charge{}, discharge{}, sale{};
  std::array<double, 3> sigma{};
  double constant = 0.0;

  double at(double xg, const ControlPoint& u, const std::array<double, 3>& caps) const {
    double v = constant + x_g * xg;
    for (int d = 0; d < 3; ++d)
      v += charge[d] * u.charge[d] + discharge[d] * u.discharge[d] + sale[d] * u.sale[d] +
           sigma[d] * caps[d];
    return v;
  }
};

/// Profit rate at one interval: grid revenue of the terminal node n9 plus the
/// direct-sale streams, minus fuel, carbon, and O&M rates. Revenue
/// coefficients are extracted from eval_nodes at unit inputs, so the objective
/// stays consistent with the node algebra by construction.
inline ProfitCoeffs profit_rate_coefficients(const HesConfig& c, const PriceSample& prices) {
  ProfitCoeffs pc;
  const ControlPoint zero;
  auto n9_of = [&c](double xg, const ControlPoint& u) { return eval_nodes(c, xg, u).n9; };

  // Grid revenue C_E * n9.
  pc.x_g = prices.e * n9_of(1.0, zero);
  for (Domain d : kDomains) {
    if (!c.storage[d].enabled) continue;
    ControlPoint u;
    u.charge[d] = 1.0;
    pc.charge[d] = prices.e * n9_of(0.0, u);
    u = ControlPoint{};
    u.discharge[d] = 1.0;
    pc.discharge[d] = prices.e * n9_of(0.0, u);
    u = ControlPoint{};
    u.sale[d] = 1.0;
    pc.sale[d] = prices.e * n9_of(0.0, u);
  }
  // Direct sales at domain prices.
  if (c.storage[P].enabled) pc.sale[P] += prices.p * c.storage[P].eta_out;
  if (c.storage[E].enabled) pc.sale[E] += prices.e * c.storage[E].eta_out;
  if (c.storage[T].enabled) pc.sale[T] += prices.t * c.storage[T].eta_out;

  // Fuel and carbon.
  const GeneratorSpec& g = c.generator;
  pc.x_g -= g.rho_fuel * prices.fuel * (1.0 + g.beta_backend);
  pc.x_g -= c.economics.c_co2 * g.alpha_co2 * g.rho_fuel;

  // Variable O&M on energy/commodity throughput.
  const EconomicParams& ec = c.economics;
  pc.x_g -= ec.c_vom_g;
  for (Domain d : kDomains) {
    const StorageSpec& s = c.storage[d];
    if (!s.enabled) continue;
    const double in_rate = (d == T) ? s.eta_in / s.e2h : s.eta_in;
    pc.charge[d] -= ec.c_vom[d] * in_rate;
    pc.discharge[d] -= ec.c_vom[d];
  }

  // Fixed O&M, prorated hourly.
  pc.constant -= ec.c_fom_g / kHoursPerYear;
  for (Domain d : kDomains)
    if (c.storage[d].enabled) pc.sigma[d] -= ec.c_fom[d];

  return pc;
}

struct NpvBreakdown {
  double npv = 0.0;
  double capital = 0.0;
  double fixed_om = 0.0, variable_om = 0.0, fuel = 0.0, carbon = 0.0;
  double revenue_primary = 0.0, revenue_electric = 0.0, revenue_tertiary = 0.0;
};

/// Recomputes the NPV by discounted left-endpoint quadrature over the decoded
/// trajectory, independently of the LP objective path.
inline NpvBreakdown npv_breakdown(const Trajectory& traj, const HesConfig& c,
                                  const PriceSeries& prices) {
  const Mesh& mesh = traj.mesh;
  const long K = mesh.n_intervals();
  if (static_cast<long>(traj.x_g.size()) != mesh.n_nodes ||
      static_cast<long>(traj.nodes.size()) != K)
    throw HesError("npv_breakdown: trajectory does not match its mesh");
  const GeneratorSpec& g = c.generator;
  const EconomicParams& ec = c.economics;
  NpvBreakdown b;
  b.capital = capital_cost_affine(
                  ec, {c.storage[0].enabled, c.storage[1].enabled, c.storage[2].enabled})
                  .at(traj.sigma);
  for (long k = 0; k < K; ++k) {
    const double t = mesh.time_at(k) - mesh.t0;
    const double w = mesh.h / discount_factor(t, ec.r);
    const PriceSample pr = prices.at(k);
    const double xg = traj.x_g[static_cast<size_t>(k)];
    const ControlPoint u = traj.control_at(k);
    const NodeValues& n = traj.nodes[static_cast<size_t>(k)];

    double grid = n.n9;
    if (c.storage[E].enabled) grid += c.storage[E].eta_out * u.sale[E];
    b.revenue_electric += w * pr.e * grid;
    if (c.storage[P].enabled) b.revenue_primary += w * pr.p * c.storage[P].eta_out * u.sale[P];
    if (c.storage[T].enabled) b.revenue_tertiary += w * pr.t * c.storage[T].eta_out * u.sale[T];

    b.fuel += w * g.rho_fuel * pr.fuel * xg * (1.0 + g.beta_backend);
    b.carbon += w * ec.c_co2 * g.alpha_co2 * g.rho_fuel * xg;

    double vom = ec.c_vom_g * xg;
    double fom = ec.c_fom_g / kHoursPerYear;
    for (Domain d : kDomains) {
      const StorageSpec& s = c.storage[d];
      if (!s.enabled) continue;
      const double in_rate = (d == T) ? s.eta_in / s.e2h : s.eta_in;
      vom += ec.c_vom[d] * (in_rate * u.charge[d] + u.discharge[d]);
      fom += ec.c_fom[d] * traj.sigma[d];
    }
    b.variable_om += w * vom;
    b.fixed_om += w * fom;
  }
  b.npv = -b.capital - b.fixed_om - b.variable_om - b.fuel - b.carbon + b.revenue_primary +
          b.revenue_electric + b.revenue_tertiary;
  return b;
}

}  // namespace hes
