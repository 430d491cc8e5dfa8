#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hes/common.hpp"

namespace hes {

/// A periodic exogenous time series (prices, wind speed, availability).
/// Samples are (hour index, value) pairs with hold-last interpolation;
/// `period_hours` is the base period over which the series repeats.
struct Signal {
  std::string name;
  std::string unit;
  std::vector<std::pair<long, double>> samples;
  double period_hours = 0.0;

  bool empty() const { return samples.empty(); }

  /// Hold-last value at time t (hours). t must be >= first sample hour.
  double value_at(double t) const {
    if (samples.empty()) throw HesError("signal '" + name + "' has no samples");
    if (t < static_cast<double>(samples.front().first))
      throw HesError("signal '" + name + "' queried before first sample");
    auto it = std::upper_bound(
        samples.begin(), samples.end(), t,
        [](double lhs, const std::pair<long, double>& s) { return lhs < static_cast<double>(s.first); });
    return std::prev(it)->second;
  }
};

struct TurbineSpec {
  double c_p = 0.55;        // capacity factor [-]
  double rho_air = 1.225;   // air density [kg/m^3]
  double rotor_d = 125.0;   // rotor diameter [m]
  double p_rated = 2.8;     // rated power per turbine [MW]
  double v_cutout = 25.0;   // cut-out speed [m/s]
  int count = 1;            // turbines in the farm
};

inline Signal make_signal(std::string name, std::string unit,
                          std::vector<std::pair<long, double>> samples,
                          double period_hours = 0.0) {
  Signal s;
  s.name = std::move(name);
  s.unit = std::move(unit);
  s.samples = std::move(samples);
  if (period_hours <= 0.0 && !s.samples.empty())
    period_hours = static_cast<double>(s.samples.back().first + 1);
  s.period_hours = period_hours;
  long prev = -1;
  for (const auto& [h, v] : s.samples) {
    if (h < 0) throw HesError("signal '" + s.name + "': negative hour index");
    if (h <= prev) throw HesError("signal '" + s.name + "': non-monotone hour " + std::to_string(h));
    if (!std::isfinite(v)) throw HesError("signal '" + s.name + "': non-finite value");
    prev = h;
  }
  if (!s.samples.empty() &&
      s.period_hours < static_cast<double>(s.samples.back().first - s.samples.front().first))
    throw HesError("signal '" + s.name + "': period shorter than sample span");
  return s;
}

/// Reads a two-column CSV (hour,value) with a one-line header. The header's
/// second field, when present, is treated as a unit annotation and must match
/// the requested unit tag.
inline Signal load_signal_csv(const std::string& path, const std::string& unit,
                              double period_hours = 0.0) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open signal file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  // header: "hour,<annotation>"
  if (auto comma = line.find(','); comma != std::string::npos) {
    std::string annot = line.substr(comma + 1);
    while (!annot.empty() && (annot.back() == '\r' || annot.back() == ' ')) annot.pop_back();
    if (!annot.empty() && annot != "value" && !unit.empty() && annot != unit)
      throw ParseError(path + ": unit annotation '" + annot + "' does not match '" + unit + "'");
  }
  std::vector<std::pair<long, double>> samples;
  long line_no = 1;
  long prev = -1;
  while (std::getline(in, line)) {
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError(path + ": missing comma at line " + std::to_string(line_no));
    char* end = nullptr;
    const std::string hour_s = line.substr(0, comma);
    const std::string val_s = line.substr(comma + 1);
    long hour = std::strtol(hour_s.c_str(), &end, 10);
    if (end == hour_s.c_str() || *end != '\0' || hour < 0)
      throw ParseError(path + ": bad hour at line " + std::to_string(line_no));
    double value = std::strtod(val_s.c_str(), &end);
    if (end == val_s.c_str() || !std::isfinite(value))
      throw ParseError(path + ": bad value at line " + std::to_string(line_no));
    if (hour <= prev)
      throw ParseError(path + ": non-monotone hour at line " + std::to_string(line_no));
    prev = hour;
    samples.emplace_back(hour, value);
  }
  if (samples.empty()) throw ParseError(path + ": no samples");
  std::string name = path;
  if (auto slash = name.find_last_of("/\\"); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos) name = name.substr(0, dot);
  return make_signal(name, unit, std::move(samples), period_hours);
}

/// Repeats the signal over n_periods copies of its base period.
inline Signal periodic_extend(const Signal& signal, long n_periods) {
  if (n_periods < 1) throw HesError("periodic_extend: n_periods must be >= 1");
  if (signal.samples.empty()) throw HesError("periodic_extend: empty signal");
  Signal out = signal;
  if (n_periods == 1) return out;
  const long period = static_cast<long>(signal.period_hours);
  if (static_cast<double>(period) != signal.period_hours)
    throw HesError("periodic_extend: non-integer base period");
  out.samples.reserve(signal.samples.size() * static_cast<size_t>(n_periods));
  for (long p = 1; p < n_periods; ++p)
    for (const auto& [h, v] : signal.samples) out.samples.emplace_back(h + p * period, v);
  out.period_hours = signal.period_hours * static_cast<double>(n_periods);
  return out;
}

/// Power of a single turbine at wind speed v [m/s], in MW.
inline double turbine_power(double v, const TurbineSpec& turbine) {
  if (v < 0.0) throw HesError("negative wind speed");
  if (v > turbine.v_cutout) return 0.0;
  const double area = M_PI * turbine.rotor_d * turbine.rotor_d / 4.0;
  const double watts = turbine.c_p * 0.5 * turbine.rho_air * area * v * v * v;
  return std::clamp(watts * 1e-6, 0.0, turbine.p_rated);
}

/// Converts a wind-speed signal [m/s] to farm availability [MW], clamped to
/// the generator capacity `cap`.
inline Signal wind_speed_to_availability(const Signal& v, const TurbineSpec& turbine, double cap) {
  Signal out;
  out.name = v.name + "_availability";
  out.unit = "MW";
  out.period_hours = v.period_hours;
  out.samples.reserve(v.samples.size());
  for (const auto& [h, speed] : v.samples) {
    const double farm = static_cast<double>(turbine.count) * turbine_power(speed, turbine);
    out.samples.emplace_back(h, std::min(farm, cap));
  }
  return out;
}

}  // namespace hes
