#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace hes {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Hours per calendar year used for discounting and fixed-cost proration.
// 30 years * 8766 h = 262980 h, the default long-horizon hourly mesh span.
inline constexpr double kHoursPerYear = 8766.0;

class HesError : public std::runtime_error {
 public:
  explicit HesError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public HesError {
 public:
  explicit IoError(const std::string& what) : HesError(what) {}
};

class ParseError : public HesError {
 public:
  explicit ParseError(const std::string& what) : HesError(what) {}
};

inline bool nearly_equal(double a, double b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_exact(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace hes
