#pragma once

#include <cmath>
#include <vector>

#include "hes/common.hpp"
#include "hes/signal.hpp"

namespace hes {

/// Equidistant time mesh: n_nodes grid points, n_nodes-1 control intervals.
struct Mesh {
  double t0 = 0.0;  // [h]
  double tf = 0.0;  // [h]
  double h = 1.0;   // step [h]
  long n_nodes = 0;

  long n_intervals() const { return n_nodes - 1; }
  double time_at(long node) const { return t0 + h * static_cast<double>(node); }
};

inline Mesh build_mesh(double t0, double tf, double h) {
  if (!(tf > t0)) throw HesError("build_mesh: tf must be greater than t0");
  if (!(h > 0.0)) throw HesError("build_mesh: step must be positive");
  const double steps = (tf - t0) / h;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps))
    throw HesError("build_mesh: (tf - t0) is not an integral number of steps");
  Mesh m;
  m.t0 = t0;
  m.tf = tf;
  m.h = h;
  m.n_nodes = static_cast<long>(rounded) + 1;
  return m;
}

/// Piecewise-constant (hold-last) values at every mesh node time.
/// Index k of the result doubles as the interval-k left-endpoint value.
inline std::vector<double> resample_to_mesh(const Signal& signal, const Mesh& mesh) {
  if (signal.samples.empty()) throw HesError("resample_to_mesh: empty signal");
  if (mesh.t0 < static_cast<double>(signal.samples.front().first) ||
      mesh.tf > signal.period_hours)
    throw HesError("resample_to_mesh: signal '" + signal.name + "' does not cover the mesh");
  std::vector<double> out(static_cast<size_t>(mesh.n_nodes));
  size_t cursor = 0;
  for (long k = 0; k < mesh.n_nodes; ++k) {
    const double t = mesh.time_at(k);
    while (cursor + 1 < signal.samples.size() &&
           static_cast<double>(signal.samples[cursor + 1].first) <= t)
      ++cursor;
    out[static_cast<size_t>(k)] = signal.samples[cursor].second;
  }
  return out;
}

}  // namespace hes
