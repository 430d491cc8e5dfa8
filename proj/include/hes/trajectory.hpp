#pragma once

#include <array>
#include <vector>

#include "hes/mesh.hpp"
#include "hes/model.hpp"

namespace hes {

/// A solved run decoded into time series: states at nodes, controls and node
/// values at intervals, plus the optimal capacities.
struct Trajectory {
  Mesh mesh;
  std::vector<double> x_g;                          // per node
  std::array<std::vector<double>, 3> x_s;           // per node, enabled domains only
  std::vector<double> u_g;                          // per interval; empty when tau = 0
  std::array<std::vector<double>, 3> charge{}, discharge{}, sale{};  // per interval
  std::vector<NodeValues> nodes;                    // per interval
  std::vector<double> grid_power;                   // n9 per interval [MW]
  std::array<double, 3> sigma{};

  ControlPoint control_at(long k) const {
    ControlPoint u;
    if (!u_g.empty()) u.u_g = u_g[static_cast<size_t>(k)];
    for (int d = 0; d < 3; ++d) {
      if (!charge[d].empty()) u.charge[d] = charge[d][static_cast<size_t>(k)];
      if (!discharge[d].empty()) u.discharge[d] = discharge[d][static_cast<size_t>(k)];
      if (!sale[d].empty()) u.sale[d] = sale[d][static_cast<size_t>(k)];
    }
    return u;
  }
};

}  // namespace hes
