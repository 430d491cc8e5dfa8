#pragma once

#include <string>
#include <vector>

namespace hes {

enum class SolveStatus {
  Optimal,
  Infeasible,
  Unbounded,
  IterationLimit,
  SingularBasis,
  FeasibleUnverified,  // primal accepted, no (passing) dual certificate
};

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration-limit";
    case SolveStatus::SingularBasis: return "singular-basis";
    case SolveStatus::FeasibleUnverified: return "feasible, optimality unverified";
  }
  return "?";
}

struct SolveReport {
  SolveStatus status = SolveStatus::IterationLimit;
  double objective = 0.0;            // maximization sense, constant included
  std::vector<double> primal;        // structural columns
  std::vector<double> row_dual;      // >= 0 for '<' rows (minimization convention)
  std::vector<double> reduced_cost;  // minimization-form reduced costs
  bool has_duals = false;
  long iterations = 0;
  double max_primal_residual = 0.0;
  double max_dual_residual = 0.0;
  double complementarity_residual = 0.0;
  double duality_gap = 0.0;
  double wall_time_s = 0.0;
  int infeasible_row = -1;           // first row left unsatisfied by phase 1
  std::string diagnostic;
};

}  // namespace hes
