#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "hes/common.hpp"
#include "hes/signal.hpp"

namespace hes {

/// Storage energy domains: the generator's native domain (e.g. thermal),
/// electricity (e.g. battery), and a derived commodity (e.g. hydrogen).
enum Domain : int { P = 0, E = 1, T = 2 };
inline constexpr std::array<Domain, 3> kDomains{P, E, T};
inline const char* domain_name(Domain d) { return d == P ? "P" : d == E ? "E" : "T"; }

/// A bound that is either a constant or tracks the availability signal.
struct BoundSpec {
  double value = 0.0;
  bool from_availability = false;

  static BoundSpec constant(double v) { return {v, false}; }
  static BoundSpec availability() { return {0.0, true}; }
};

struct GeneratorSpec {
  double nominal_capacity = 0.0;  // [MW]
  double tau = 0.0;               // ramp time constant [h]; 0 collapses the state dynamics
  double eta_g = 1.0;             // primary-to-electric conversion efficiency [-]
  double rho_fuel = 0.0;          // fuel rate per power [kg/(h*MW)]
  double alpha_co2 = 0.0;         // CO2 per fuel mass [ton/kg]
  double beta_backend = 0.0;      // back-end fuel cost fraction of front-end [-]
  double u_g_min = 0.0, u_g_max = 0.0;  // requested-power bounds [MW]
  BoundSpec x_g_min = BoundSpec::constant(0.0);
  BoundSpec x_g_max = BoundSpec::constant(0.0);
  double x0 = 0.0;                // initial power level [MW], used when tau > 0
  bool dispatchable = true;
};

struct StorageSpec {
  bool enabled = false;
  double eta_in = 1.0;    // charge efficiency [-]
  double eta_out = 1.0;   // discharge efficiency [-]
  double u_in_max = 0.0;  // max charge rate [MW]
  double u_out_max = 0.0; // max discharge rate [MW, or kg/h for the tertiary domain]
  double x0 = 0.0;        // initial stored amount [MWh or kg]
  bool enforce_terminal = false;          // x_S(tf) = x_S(t0)
  std::optional<double> sigma_max;        // capacity upper bound; absent = unbounded
  bool direct_sale_allowed = false;       // whether u_R may be nonzero
  // Tertiary conversion: electricity required per unit commodity produced and
  // electricity yielded per unit commodity combusted [MWh/kg].
  double e2h = 0.0;
  double h2e = 0.0;
};

/// Parasitic loads as fractions of the driving signal (generator power level
/// for l_p/l_e, tertiary charge signal for l_pt).
struct LoadModel {
  double l_p = 0.0;
  double l_e = 0.0;
  double l_pt = 0.0;
};

struct EconomicParams {
  double c_occ_g = 0.0;                 // generator overnight cost [$]
  std::array<double, 3> c_occ{};        // storage overnight cost per capacity [$/MWh or $/kg]
  double c_fom_g = 0.0;                 // generator fixed O&M [$/yr]
  std::array<double, 3> c_fom{};        // storage fixed O&M [$/ (capacity * h)]
  double c_vom_g = 0.0;                 // generator variable O&M [$/MWh]
  std::array<double, 3> c_vom{};        // storage variable O&M [$/MWh or $/kg]
  double c_co2 = 0.0;                   // carbon tax [$/ton]
  double r = 0.0;                       // discount / cost-of-capital rate [1/yr]
  double t_con = 0.0;                   // construction time [yr]
};

struct HorizonSpec {
  double t0 = 0.0, tf = 0.0, h = 1.0;  // [h]
};

/// Bound replacement applied after all window rules; `kind` is one of
/// x_g, u_g, charge_P/E/T, discharge_P/E/T, sale_P/E/T.
struct BoundOverride {
  std::string kind;
  long hour = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct ScenarioOverlay {
  std::vector<int> peak_hours;  // daily hours [0,24): full capacity, no charging
  std::array<std::optional<std::vector<int>>, 3> sale_hours;  // daily u_R windows
  std::vector<BoundOverride> overrides;

  bool empty() const {
    return peak_hours.empty() && !sale_hours[0] && !sale_hours[1] && !sale_hours[2] &&
           overrides.empty();
  }
};

/// File paths for the exogenous series referenced by a configuration.
struct SignalPaths {
  std::string price_e, price_p, price_t, price_fuel, availability;
};

/// Loaded exogenous series. Unused roles stay empty.
struct SignalSet {
  Signal price_e, price_p, price_t, price_fuel, availability;
};

struct HesConfig {
  GeneratorSpec generator;
  std::array<StorageSpec, 3> storage{};  // indexed by Domain
  LoadModel loads;
  EconomicParams economics;
  HorizonSpec horizon;
  ScenarioOverlay scenario;
  SignalPaths signals;
  bool pure_generator_ok = false;  // allow a run with no storage enabled

  const StorageSpec& store(Domain d) const { return storage[d]; }
  StorageSpec& store(Domain d) { return storage[d]; }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_config(const HesConfig& c) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) { rep.violations.push_back(msg); };
  const GeneratorSpec& g = c.generator;

  if (g.nominal_capacity < 0.0) fail("generator.nominal_capacity must be non-negative");
  if (g.tau < 0.0) fail("generator.tau must be non-negative");
  if (!(g.eta_g > 0.0 && g.eta_g <= 1.0)) fail("generator.eta_g must lie in (0, 1]");
  if (g.rho_fuel < 0.0) fail("generator.rho_fuel must be non-negative");
  if (g.alpha_co2 < 0.0) fail("generator.alpha_co2 must be non-negative");
  if (g.beta_backend < 0.0) fail("generator.beta_backend must be non-negative");
  if (g.u_g_min < 0.0 || g.u_g_min > g.u_g_max) fail("bound inversion on u_G");
  if (g.u_g_max > g.nominal_capacity + 1e-12)
    fail("generator.u_g_max exceeds nominal capacity");
  if (!g.x_g_min.from_availability && !g.x_g_max.from_availability &&
      g.x_g_min.value > g.x_g_max.value)
    fail("bound inversion on x_G");
  if (!g.x_g_max.from_availability && g.x_g_max.value > g.nominal_capacity + 1e-12)
    fail("generator.x_g_max exceeds nominal capacity");
  if (g.x_g_max.from_availability && c.signals.availability.empty())
    fail("missing signal reference: availability (x_g_max is signal-valued)");
  if (!g.dispatchable && !g.x_g_max.from_availability)
    fail("non-dispatchable generator requires a signal-valued x_g_max");

  bool any_storage = false;
  for (Domain d : kDomains) {
    const StorageSpec& s = c.storage[d];
    if (!s.enabled) continue;
    any_storage = true;
    const std::string pre = std::string("storage_") + (d == P ? "p" : d == E ? "e" : "t") + ".";
    if (!(s.eta_in > 0.0 && s.eta_in <= 1.0)) fail(pre + "eta_in must lie in (0, 1]");
    if (!(s.eta_out > 0.0 && s.eta_out <= 1.0)) fail(pre + "eta_out must lie in (0, 1]");
    if (s.u_in_max < 0.0) fail(pre + "u_in_max must be non-negative");
    if (s.u_out_max < 0.0) fail(pre + "u_out_max must be non-negative");
    if (s.x0 < 0.0) fail(pre + "x0 must be non-negative");
    if (s.sigma_max && *s.sigma_max < s.x0) fail(pre + "sigma_max below initial state");
    if (d == T) {
      if (!(s.e2h > 0.0)) fail("tertiary requires e2h");
      if (s.h2e < 0.0) fail(pre + "h2e must be non-negative");
    }
  }
  if (!any_storage && !c.pure_generator_ok)
    fail("no storage enabled and pure-generator run not flagged");

  if (!(c.loads.l_p >= 0.0 && c.loads.l_p < 1.0)) fail("loads.l_p must lie in [0, 1)");
  if (!(c.loads.l_e >= 0.0 && c.loads.l_e < 1.0)) fail("loads.l_e must lie in [0, 1)");
  if (!(c.loads.l_pt >= 0.0 && c.loads.l_pt < 1.0)) fail("loads.l_pt must lie in [0, 1)");

  const EconomicParams& ec = c.economics;
  if (ec.c_occ_g < 0.0 || ec.c_fom_g < 0.0 || ec.c_vom_g < 0.0 || ec.c_co2 < 0.0)
    fail("economics: generator costs must be non-negative");
  for (Domain d : kDomains)
    if (ec.c_occ[d] < 0.0 || ec.c_fom[d] < 0.0 || ec.c_vom[d] < 0.0)
      fail(std::string("economics: storage ") + domain_name(d) + " costs must be non-negative");
  if (!(ec.r >= 0.0 && ec.r < 1.0)) fail("economics.r must lie in [0, 1)");
  if (ec.t_con < 0.0) fail("economics.t_con must be non-negative");

  if (!(c.horizon.tf > c.horizon.t0)) fail("horizon: tf must exceed t0");
  if (!(c.horizon.h > 0.0)) fail("horizon: step must be positive");

  // Signal references required by enabled revenue/cost streams.
  if (c.signals.price_e.empty()) fail("missing signal reference: price_e");
  if (g.rho_fuel > 0.0 && c.signals.price_fuel.empty())
    fail("missing signal reference: price_fuel");
  if (c.storage[P].enabled && c.storage[P].direct_sale_allowed && c.signals.price_p.empty())
    fail("missing signal reference: price_p");
  if (c.storage[T].enabled &&
      (c.storage[T].direct_sale_allowed || c.scenario.sale_hours[T]) &&
      c.signals.price_t.empty())
    fail("missing signal reference: price_t");

  for (int h : c.scenario.peak_hours)
    if (h < 0 || h >= 24) fail("scenario.peak_hours entries must lie in [0, 24)");
  for (Domain d : kDomains)
    if (c.scenario.sale_hours[d])
      for (int h : *c.scenario.sale_hours[d])
        if (h < 0 || h >= 24)
          fail(std::string("scenario.sale_hours[") + domain_name(d) + "] entries must lie in [0, 24)");

  return rep;
}

/// One interval's control values.
struct ControlPoint {
  double u_g = 0.0;
  std::array<double, 3> charge{};     // u->
  std::array<double, 3> discharge{};  // u<-
  std::array<double, 3> sale{};       // u_R
};

/// Available power at each plant node plus the generator-supplied load signals.
struct NodeValues {
  double n1 = 0, n2 = 0, n3 = 0, n4 = 0, n5 = 0, n6 = 0, n7 = 0, n8 = 0, n9 = 0;
  double l_gp = 0, l_gpt = 0, l_ge = 0;
};

/// Evaluates the affine node expressions at one point. Pure; feasibility of
/// the result is the optimizer's concern, not checked here.
inline NodeValues eval_nodes(const HesConfig& c, double x_g, const ControlPoint& u) {
  const LoadModel& ld = c.loads;
  const StorageSpec& sp = c.storage[P];
  const StorageSpec& se = c.storage[E];
  const StorageSpec& st = c.storage[T];
  NodeValues n;
  n.l_gp = ld.l_p * x_g;
  if (sp.enabled) n.l_gp -= sp.eta_out * (u.discharge[P] - u.sale[P]);
  n.l_gpt = st.enabled ? ld.l_pt * u.charge[T] : 0.0;
  n.l_ge = ld.l_e * x_g;
  if (se.enabled) n.l_ge -= se.eta_out * (u.discharge[E] - u.sale[E]);
  n.n1 = x_g;
  n.n2 = n.n1 - (sp.enabled ? u.charge[P] : 0.0);
  n.n3 = n.n2 - n.l_gp;
  n.n4 = n.n3 - n.l_gpt;
  n.n5 = c.generator.eta_g * n.n4;
  n.n6 = n.n5 - (se.enabled ? u.charge[E] : 0.0);
  n.n7 = n.n6 - n.l_ge;
  n.n8 = n.n7 - (st.enabled ? u.charge[T] : 0.0);
  n.n9 = n.n8;
  if (st.enabled) n.n9 += st.h2e * st.eta_out * (u.discharge[T] - u.sale[T]);
  return n;
}

}  // namespace hes
