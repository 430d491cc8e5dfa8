#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "hes/common.hpp"
#include "hes/model.hpp"
#include "hes/signal.hpp"

namespace hes {

namespace detail {

using nlohmann::json;

inline double jnum(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ParseError(std::string("config: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline bool jbool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean())
    throw ParseError(std::string("config: '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

inline BoundSpec jbound(const json& j, const char* key, BoundSpec fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_number()) return BoundSpec::constant(v.get<double>());
  if (v.is_object() && v.contains("signal")) {
    if (v.at("signal").get<std::string>() != "availability")
      throw ParseError(std::string("config: '") + key + "': only the availability signal may drive a bound");
    return BoundSpec::availability();
  }
  throw ParseError(std::string("config: '") + key + "' must be a number or {\"signal\": \"availability\"}");
}

inline StorageSpec jstorage(const json& j, Domain d) {
  StorageSpec s;
  s.enabled = jbool(j, "enabled", true);
  s.eta_in = jnum(j, "eta_in", 1.0);
  s.eta_out = jnum(j, "eta_out", 1.0);
  s.u_in_max = jnum(j, "u_in_max", 0.0);
  s.u_out_max = jnum(j, "u_out_max", 0.0);
  s.x0 = jnum(j, "x0", 0.0);
  s.enforce_terminal = jbool(j, "enforce_terminal", false);
  if (j.contains("sigma_max")) s.sigma_max = jnum(j, "sigma_max", 0.0);
  s.direct_sale_allowed = jbool(j, "direct_sale_allowed", false);
  if (d == T) {
    s.e2h = jnum(j, "e2h", 0.0);
    s.h2e = jnum(j, "h2e", 0.0);
  }
  return s;
}

inline std::vector<int> jhours(const json& v, const std::string& what) {
  if (!v.is_array()) throw ParseError("config: " + what + " must be an array of hours");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ParseError("config: " + what + " entries must be integers");
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace detail

inline HesConfig config_from_json(const nlohmann::json& j) {
  using detail::jbool;
  using detail::jbound;
  using detail::jnum;
  HesConfig c;
  if (j.contains("generator")) {
    const auto& g = j.at("generator");
    c.generator.nominal_capacity = jnum(g, "nominal_capacity", 0.0);
    c.generator.tau = jnum(g, "tau", 0.0);
    c.generator.eta_g = jnum(g, "eta_g", 1.0);
    c.generator.rho_fuel = jnum(g, "rho_fuel", 0.0);
    c.generator.alpha_co2 = jnum(g, "alpha_co2", 0.0);
    c.generator.beta_backend = jnum(g, "beta_backend", 0.0);
    c.generator.u_g_min = jnum(g, "u_g_min", 0.0);
    c.generator.u_g_max = jnum(g, "u_g_max", c.generator.nominal_capacity);
    c.generator.x_g_min = jbound(g, "x_g_min", BoundSpec::constant(0.0));
    c.generator.x_g_max = jbound(g, "x_g_max", BoundSpec::constant(c.generator.nominal_capacity));
    c.generator.x0 = jnum(g, "x0", 0.0);
    c.generator.dispatchable = jbool(g, "dispatchable", true);
  }
  if (j.contains("storage")) {
    const auto& s = j.at("storage");
    if (s.contains("p")) c.storage[P] = detail::jstorage(s.at("p"), P);
    if (s.contains("e")) c.storage[E] = detail::jstorage(s.at("e"), E);
    if (s.contains("t")) c.storage[T] = detail::jstorage(s.at("t"), T);
  }
  if (j.contains("loads")) {
    const auto& l = j.at("loads");
    c.loads.l_p = jnum(l, "l_p", 0.0);
    c.loads.l_e = jnum(l, "l_e", 0.0);
    c.loads.l_pt = jnum(l, "l_pt", 0.0);
  }
  if (j.contains("economics")) {
    const auto& e = j.at("economics");
    c.economics.c_occ_g = jnum(e, "c_occ_g", 0.0);
    c.economics.c_occ = {jnum(e, "c_occ_p", 0.0), jnum(e, "c_occ_e", 0.0), jnum(e, "c_occ_t", 0.0)};
    c.economics.c_fom_g = jnum(e, "c_fom_g", 0.0);
    c.economics.c_fom = {jnum(e, "c_fom_p", 0.0), jnum(e, "c_fom_e", 0.0), jnum(e, "c_fom_t", 0.0)};
    c.economics.c_vom_g = jnum(e, "c_vom_g", 0.0);
    c.economics.c_vom = {jnum(e, "c_vom_p", 0.0), jnum(e, "c_vom_e", 0.0), jnum(e, "c_vom_t", 0.0)};
    c.economics.c_co2 = jnum(e, "c_co2", 0.0);
    c.economics.r = jnum(e, "r", 0.0);
    c.economics.t_con = jnum(e, "t_con", 0.0);
  }
  if (j.contains("horizon")) {
    const auto& h = j.at("horizon");
    c.horizon.t0 = jnum(h, "t0", 0.0);
    c.horizon.tf = jnum(h, "tf", 0.0);
    c.horizon.h = jnum(h, "h", 1.0);
  }
  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    if (s.contains("peak_hours"))
      c.scenario.peak_hours = detail::jhours(s.at("peak_hours"), "scenario.peak_hours");
    if (s.contains("sale_hours")) {
      const auto& sh = s.at("sale_hours");
      if (sh.contains("p")) c.scenario.sale_hours[P] = detail::jhours(sh.at("p"), "sale_hours.p");
      if (sh.contains("e")) c.scenario.sale_hours[E] = detail::jhours(sh.at("e"), "sale_hours.e");
      if (sh.contains("t")) c.scenario.sale_hours[T] = detail::jhours(sh.at("t"), "sale_hours.t");
    }
    if (s.contains("overrides")) {
      for (const auto& ov : s.at("overrides")) {
        BoundOverride b;
        b.kind = ov.at("kind").get<std::string>();
        b.hour = ov.at("hour").get<long>();
        b.lower = jnum(ov, "lower", 0.0);
        b.upper = ov.contains("upper") && ov.at("upper").is_null() ? kInf
                                                                   : jnum(ov, "upper", kInf);
        c.scenario.overrides.push_back(std::move(b));
      }
    }
  }
  if (j.contains("signals")) {
    const auto& s = j.at("signals");
    auto path = [&s](const char* key) {
      return s.contains(key) ? s.at(key).get<std::string>() : std::string();
    };
    c.signals.price_e = path("price_e");
    c.signals.price_p = path("price_p");
    c.signals.price_t = path("price_t");
    c.signals.price_fuel = path("price_fuel");
    c.signals.availability = path("availability");
  }
  c.pure_generator_ok = jbool(j, "pure_generator_ok", false);
  return c;
}

inline HesConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Loads every signal file referenced by the configuration, resolving
/// relative paths against `signals_dir`.
inline SignalSet load_signals(const HesConfig& config, const std::string& signals_dir) {
  auto resolve = [&signals_dir](const std::string& p) {
    if (p.empty() || p.front() == '/' || signals_dir.empty()) return p;
    return signals_dir + "/" + p;
  };
  SignalSet set;
  const SignalPaths& sp = config.signals;
  if (!sp.price_e.empty()) set.price_e = load_signal_csv(resolve(sp.price_e), "$/MWh");
  if (!sp.price_p.empty()) set.price_p = load_signal_csv(resolve(sp.price_p), "$/MWh");
  if (!sp.price_t.empty()) set.price_t = load_signal_csv(resolve(sp.price_t), "$/kg");
  if (!sp.price_fuel.empty()) set.price_fuel = load_signal_csv(resolve(sp.price_fuel), "$/kg");
  if (!sp.availability.empty())
    set.availability = load_signal_csv(resolve(sp.availability), "MW");
  return set;
}

}  // namespace hes
