#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hes/common.hpp"
#include "hes/solve_report.hpp"
#include "hes/transcription.hpp"

namespace hes {

struct OptimalityCertificate {
  bool pass = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double complementarity = 0.0;
  double gap = 0.0;
  std::string first_violation;
};

namespace detail {

/// Minimization equality form: structural columns, then one slack per row.
struct StdForm {
  long m = 0, n_struct = 0;
  std::vector<std::vector<std::pair<long, double>>> cols;
  std::vector<double> lo, up, cost;
  std::vector<double> rhs;
};

inline StdForm to_standard_form(const LpProblem& lp) {
  StdForm f;
  f.m = static_cast<long>(lp.rows.size());
  f.n_struct = lp.n_cols;
  const long n_total = f.n_struct + f.m;
  f.cols.resize(static_cast<size_t>(n_total));
  f.lo.resize(static_cast<size_t>(n_total));
  f.up.resize(static_cast<size_t>(n_total));
  f.cost.assign(static_cast<size_t>(n_total), 0.0);
  f.rhs.resize(static_cast<size_t>(f.m));
  for (long j = 0; j < f.n_struct; ++j) {
    f.lo[j] = lp.col_lower[static_cast<size_t>(j)];
    f.up[j] = lp.col_upper[static_cast<size_t>(j)];
    f.cost[j] = -lp.obj[static_cast<size_t>(j)];  // max -> min
  }
  for (long i = 0; i < f.m; ++i) {
    const auto& row = lp.rows[static_cast<size_t>(i)];
    f.rhs[i] = row.rhs;
    for (const auto& [c, v] : row.terms) f.cols[static_cast<size_t>(c)].emplace_back(i, v);
    const long sj = f.n_struct + i;
    f.cols[static_cast<size_t>(sj)].emplace_back(i, 1.0);
    f.lo[static_cast<size_t>(sj)] = 0.0;
    f.up[static_cast<size_t>(sj)] = (row.sense == '=') ? 0.0 : kInf;
  }
  return f;
}

/// Bounded-variable primal revised simplex with an explicit dense basis
/// inverse, Dantzig pricing, and a Bland's-rule fallback for stalls.
class BoundedSimplex {
 public:
  BoundedSimplex(StdForm form, double tol) : f_(std::move(form)), tol_(tol) {
    n_sf_ = f_.n_struct + f_.m;
    n_all_ = n_sf_ + f_.m;  // + artificials
    // artificial columns are attached in init() once signs are known
    f_.cols.resize(static_cast<size_t>(n_all_));
    f_.lo.resize(static_cast<size_t>(n_all_), 0.0);
    f_.up.resize(static_cast<size_t>(n_all_), kInf);
    f_.cost.resize(static_cast<size_t>(n_all_), 0.0);
    x_.assign(static_cast<size_t>(n_all_), 0.0);
    where_.assign(static_cast<size_t>(n_all_), kAtLower);
  }

  SolveStatus run(long max_iter) {
    init();
    // phase 1: drive artificials to zero
    std::vector<double> phase1_cost(static_cast<size_t>(n_all_), 0.0);
    for (long j = n_sf_; j < n_all_; ++j) phase1_cost[static_cast<size_t>(j)] = 1.0;
    cost_ = &phase1_cost;
    SolveStatus st = iterate(max_iter);
    if (st != SolveStatus::Optimal) return st == SolveStatus::Unbounded ? SolveStatus::SingularBasis : st;
    double infeas = 0.0;
    for (long j = n_sf_; j < n_all_; ++j) infeas += x_[static_cast<size_t>(j)];
    if (infeas > feas_tol()) {
      for (long i = 0; i < f_.m; ++i)
        if (basic_[static_cast<size_t>(i)] >= n_sf_ &&
            x_[static_cast<size_t>(basic_[static_cast<size_t>(i)])] > feas_tol()) {
          infeasible_row_ = static_cast<int>(i);
          break;
        }
      return SolveStatus::Infeasible;
    }
    // phase 2: pin the artificials and optimize the real objective
    for (long j = n_sf_; j < n_all_; ++j) f_.up[static_cast<size_t>(j)] = 0.0;
    cost_ = &f_.cost;
    return iterate(max_iter);
  }

  double min_objective() const {
    double v = 0.0;
    for (long j = 0; j < n_sf_; ++j) v += f_.cost[static_cast<size_t>(j)] * x_[static_cast<size_t>(j)];
    return v;
  }

  std::vector<double> structural_primal() const {
    return {x_.begin(), x_.begin() + f_.n_struct};
  }

  /// Row duals of the '<='/'=' minimization form (lambda >= 0 on '<=' rows)
  /// and reduced costs of the structural columns.
  void extract_duals(std::vector<double>& lambda, std::vector<double>& reduced) const {
    Eigen::VectorXd cb(f_.m);
    for (long i = 0; i < f_.m; ++i)
      cb[i] = f_.cost[static_cast<size_t>(basic_[static_cast<size_t>(i)])];
    Eigen::VectorXd y = Binv_.transpose() * cb;
    lambda.resize(static_cast<size_t>(f_.m));
    for (long i = 0; i < f_.m; ++i) lambda[static_cast<size_t>(i)] = -y[i];
    reduced.resize(static_cast<size_t>(f_.n_struct));
    for (long j = 0; j < f_.n_struct; ++j) {
      double d = f_.cost[static_cast<size_t>(j)];
      for (const auto& [i, v] : f_.cols[static_cast<size_t>(j)]) d -= y[i] * v;
      reduced[static_cast<size_t>(j)] = d;
    }
  }

  long iterations() const { return total_iters_; }
  int infeasible_row() const { return infeasible_row_; }
  std::string diagnostic() const { return diagnostic_; }

 private:
  static constexpr int kAtLower = 0, kAtUpper = 1, kBasic = 2;

  double feas_tol() const { return tol_ * (1.0 + rhs_norm_); }

  void init() {
    rhs_norm_ = 0.0;
    for (double b : f_.rhs) rhs_norm_ = std::max(rhs_norm_, std::abs(b));
    for (long j = 0; j < n_sf_; ++j) {
      const size_t js = static_cast<size_t>(j);
      if (std::isfinite(f_.lo[js])) {
        x_[js] = f_.lo[js];
        where_[js] = kAtLower;
      } else if (std::isfinite(f_.up[js])) {
        x_[js] = f_.up[js];
        where_[js] = kAtUpper;
      } else {
        x_[js] = 0.0;
        where_[js] = kAtLower;  // free: handled by pricing
      }
    }
    std::vector<double> resid = f_.rhs;
    for (long j = 0; j < n_sf_; ++j)
      if (x_[static_cast<size_t>(j)] != 0.0)
        for (const auto& [i, v] : f_.cols[static_cast<size_t>(j)])
          resid[static_cast<size_t>(i)] -= v * x_[static_cast<size_t>(j)];
    basic_.resize(static_cast<size_t>(f_.m));
    Binv_ = Eigen::MatrixXd::Zero(f_.m, f_.m);
    for (long i = 0; i < f_.m; ++i) {
      const double s = resid[static_cast<size_t>(i)] >= 0.0 ? 1.0 : -1.0;
      const long aj = n_sf_ + i;
      f_.cols[static_cast<size_t>(aj)] = {{i, s}};
      x_[static_cast<size_t>(aj)] = std::abs(resid[static_cast<size_t>(i)]);
      where_[static_cast<size_t>(aj)] = kBasic;
      basic_[static_cast<size_t>(i)] = aj;
      Binv_(i, i) = s;
    }
  }

  SolveStatus iterate(long max_iter) {
    const std::vector<double>& c = *cost_;
    // pricing cutoff relative to the cost magnitude, so a uniform objective
    // scaling cannot change which columns count as improving
    double cost_norm = 0.0;
    for (long j = 0; j < n_all_; ++j)
      cost_norm = std::max(cost_norm, std::abs(c[static_cast<size_t>(j)]));
    const double dtol = tol_ * cost_norm;
    Eigen::VectorXd cb(f_.m), y(f_.m), w(f_.m);
    long stall = 0;
    bool bland = false;
    long since_refactor = 0;
    // columns whose entry would make the basis numerically singular; cleared
    // after every successful exchange
    std::vector<char> banned(static_cast<size_t>(n_all_), 0);
    bool any_banned = false;
    long ban_count = 0;
    for (long it = 0; it < max_iter; ++it, ++total_iters_) {
      for (long i = 0; i < f_.m; ++i)
        cb[i] = c[static_cast<size_t>(basic_[static_cast<size_t>(i)])];
      y.noalias() = Binv_.transpose() * cb;

      // pricing
      long q = -1;
      double best = 0.0;
      int q_dir = +1;
      for (long j = 0; j < n_all_; ++j) {
        const size_t js = static_cast<size_t>(j);
        if (where_[js] == kBasic || banned[js]) continue;
        if (f_.up[js] - f_.lo[js] == 0.0) continue;  // fixed
        double d = c[js];
        for (const auto& [i, v] : f_.cols[js]) d -= y[i] * v;
        const bool is_free = !std::isfinite(f_.lo[js]) && !std::isfinite(f_.up[js]);
        int dir = 0;
        if (is_free && std::abs(d) > dtol)
          dir = d < 0.0 ? +1 : -1;
        else if (where_[js] == kAtLower && d < -dtol)
          dir = +1;
        else if (where_[js] == kAtUpper && d > dtol)
          dir = -1;
        if (dir == 0) continue;
        if (bland) {
          q = j;
          q_dir = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          q = j;
          q_dir = dir;
        }
      }
      if (q < 0) {
        if (!any_banned) {
          // final refresh: recompute the basic values for the optimal basis so
          // drift accumulated by the tolerance-slack ratio test is removed
          if (!refactorize()) return SolveStatus::SingularBasis;
          return SolveStatus::Optimal;
        }
        // nothing improving outside the banned set: re-price once without bans
        std::fill(banned.begin(), banned.end(), 0);
        any_banned = false;
        continue;
      }
      const size_t qs = static_cast<size_t>(q);

      w.setZero();
      for (const auto& [i, v] : f_.cols[qs]) w.noalias() += v * Binv_.col(i);

      // two-pass (Harris) ratio test: first find the step limit with a
      // feasibility-tolerance slack, then pick the best-conditioned pivot
      // among the rows whose exact ratio fits under that limit; any bound
      // violation this introduces is capped at the slack itself
      double t_max = f_.up[qs] - f_.lo[qs];  // bound-flip distance (may be inf)
      long leave = -1;
      bool leave_to_upper = false;
      const double ztol = 1e-11;
      const double slack = feas_tol();
      auto ratio = [&](long i, double extra, double& cand, bool& to_upper) {
        const double wi = w[i];
        if (std::abs(wi) <= ztol) return false;
        const size_t bi = static_cast<size_t>(basic_[static_cast<size_t>(i)]);
        const double delta = -static_cast<double>(q_dir) * wi;  // d x_B[i] / dt
        if (delta > 0.0) {
          if (!std::isfinite(f_.up[bi])) return false;
          cand = (f_.up[bi] - x_[bi] + extra) / delta;
          to_upper = true;
        } else {
          if (!std::isfinite(f_.lo[bi])) return false;
          cand = (x_[bi] - f_.lo[bi] + extra) / (-delta);
          to_upper = false;
        }
        if (cand < 0.0) cand = 0.0;
        return true;
      };
      double t_limit = t_max;
      for (long i = 0; i < f_.m; ++i) {
        double cand;
        bool to_upper;
        if (ratio(i, slack, cand, to_upper) && cand < t_limit) t_limit = cand;
      }
      double t = t_max;
      double best_piv = 0.0;
      for (long i = 0; i < f_.m; ++i) {
        double cand;
        bool to_upper;
        if (!ratio(i, 0.0, cand, to_upper) || cand > t_limit) continue;
        const bool better = bland ? (leave < 0 || basic_[static_cast<size_t>(i)] <
                                                      basic_[static_cast<size_t>(leave)])
                                  : std::abs(w[i]) > best_piv;
        if (better) {
          best_piv = std::abs(w[i]);
          t = cand;
          leave = i;
          leave_to_upper = to_upper;
        }
      }
      if (leave >= 0) t = std::min(t, t_max);
      if (!std::isfinite(t)) return SolveStatus::Unbounded;

      const bool flip = leave < 0 || t >= t_max;
      if (!flip && std::abs(w[leave]) < 1e-9) {
        // tiny pivot: confirm the exchange keeps the basis invertible before
        // touching any iterate state, otherwise re-price without this column
        std::vector<long> tb = basic_;
        tb[static_cast<size_t>(leave)] = q;
        Eigen::MatrixXd tmp;
        if (!invert_basis(tb, tmp)) {
          banned[qs] = 1;
          any_banned = true;
          if (++ban_count > n_all_) {
            diagnostic_ = "numerically singular basis";
            return SolveStatus::SingularBasis;
          }
          continue;
        }
      }

      // apply the step
      const double step = static_cast<double>(q_dir) * t;
      if (t > 0.0) {
        for (long i = 0; i < f_.m; ++i) {
          const double wi = w[i];
          if (wi != 0.0) x_[static_cast<size_t>(basic_[static_cast<size_t>(i)])] -= step * wi;
        }
        x_[qs] += step;
      }
      const double improvement = best * t;
      if (improvement <= 1e-13 * (1.0 + std::abs(min_objective()))) {
        if (++stall > 400) bland = true;
      } else {
        stall = 0;
        bland = false;
      }

      if (flip) {
        // bound flip, basis unchanged
        where_[qs] = (q_dir > 0) ? kAtUpper : kAtLower;
        x_[qs] = (q_dir > 0) ? f_.up[qs] : f_.lo[qs];
        continue;
      }
      const long lv = basic_[static_cast<size_t>(leave)];
      x_[static_cast<size_t>(lv)] =
          leave_to_upper ? f_.up[static_cast<size_t>(lv)] : f_.lo[static_cast<size_t>(lv)];
      where_[static_cast<size_t>(lv)] = leave_to_upper ? kAtUpper : kAtLower;
      basic_[static_cast<size_t>(leave)] = q;
      where_[qs] = kBasic;
      if (any_banned) {
        std::fill(banned.begin(), banned.end(), 0);
        any_banned = false;
      }

      const double pivot = w[leave];
      if (std::abs(pivot) < 1e-9 || ++since_refactor >= 120) {
        if (!refactorize()) return SolveStatus::SingularBasis;
        since_refactor = 0;
      } else {
        Eigen::RowVectorXd rr = Binv_.row(leave) / pivot;
        Eigen::VectorXd wc = w;
        wc[leave] = 0.0;
        Binv_.noalias() -= wc * rr;
        Binv_.row(leave) = rr;
      }
    }
    return SolveStatus::IterationLimit;
  }

  /// Inverts the given basis column set, rejecting numerically singular ones
  /// via the reconstruction error of the computed inverse.
  bool invert_basis(const std::vector<long>& basis, Eigen::MatrixXd& out) const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(f_.m, f_.m);
    for (long i = 0; i < f_.m; ++i)
      for (const auto& [r, v] : f_.cols[static_cast<size_t>(basis[static_cast<size_t>(i)])])
        B(r, i) = v;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    out = lu.inverse();
    if (!out.allFinite()) return false;
    const double err =
        (B * out - Eigen::MatrixXd::Identity(f_.m, f_.m)).cwiseAbs().maxCoeff();
    return err < 1e-6;
  }

  bool refactorize() {
    if (!invert_basis(basic_, Binv_)) {
      diagnostic_ = "numerically singular basis";
      return false;
    }
    // refresh basic values from scratch to control drift
    Eigen::VectorXd r(f_.m);
    for (long i = 0; i < f_.m; ++i) r[i] = f_.rhs[static_cast<size_t>(i)];
    for (long j = 0; j < n_all_; ++j) {
      const size_t js = static_cast<size_t>(j);
      if (where_[js] == kBasic || x_[js] == 0.0) continue;
      for (const auto& [i, v] : f_.cols[js]) r[i] -= v * x_[js];
    }
    Eigen::VectorXd xb = Binv_ * r;
    for (long i = 0; i < f_.m; ++i) x_[static_cast<size_t>(basic_[static_cast<size_t>(i)])] = xb[i];
    return true;
  }

  StdForm f_;
  double tol_;
  long n_sf_ = 0, n_all_ = 0;
  const std::vector<double>* cost_ = nullptr;
  std::vector<double> x_;
  std::vector<int> where_;
  std::vector<long> basic_;
  Eigen::MatrixXd Binv_;
  double rhs_norm_ = 0.0;
  long total_iters_ = 0;
  int infeasible_row_ = -1;
  std::string diagnostic_;
};

}  // namespace detail

/// Primal feasibility residual of a candidate point; also names the first
/// violated row or bound.
inline double primal_residual(const LpProblem& lp, const std::vector<double>& x, double threshold,
                              std::string* first_violation = nullptr) {
  double worst = 0.0;
  for (const auto& row : lp.rows) {
    double ax = 0.0;
    for (const auto& [c, v] : row.terms) ax += v * x[static_cast<size_t>(c)];
    const double r = (row.sense == '=') ? std::abs(ax - row.rhs) : std::max(0.0, ax - row.rhs);
    if (r > worst) {
      worst = r;
      if (first_violation && r > threshold && first_violation->empty()) *first_violation = row.tag;
    }
  }
  for (long j = 0; j < lp.n_cols; ++j) {
    const size_t js = static_cast<size_t>(j);
    const double r =
        std::max(std::max(0.0, lp.col_lower[js] - x[js]), std::max(0.0, x[js] - lp.col_upper[js]));
    if (r > worst) {
      worst = r;
      if (first_violation && r > threshold && first_violation->empty())
        *first_violation = "bound:" + (lp.layout.total == lp.n_cols ? lp.layout.col_name(j)
                                                                    : "col" + std::to_string(j));
    }
  }
  return worst;
}

/// Checks primal feasibility, dual feasibility, complementary slackness, and
/// the duality gap of a returned solution. All thresholds are relative to
/// (1 + |objective|).
inline OptimalityCertificate verify_optimality(const LpProblem& lp, const SolveReport& report,
                                               double tol) {
  OptimalityCertificate cert;
  const double thr = tol * (1.0 + std::abs(report.objective));
  if (static_cast<long>(report.primal.size()) != lp.n_cols) {
    cert.first_violation = "primal vector size mismatch";
    return cert;
  }
  cert.primal_residual = primal_residual(lp, report.primal, thr, &cert.first_violation);
  if (!report.has_duals || static_cast<long>(report.row_dual.size()) != static_cast<long>(lp.rows.size())) {
    if (cert.first_violation.empty()) cert.first_violation = "missing duals";
    return cert;
  }
  // minimization form: c = -obj, rows '<='/'=' with lambda >= 0 on '<='.
  const std::vector<double>& x = report.primal;
  const std::vector<double>& lambda = report.row_dual;
  std::vector<double> d(static_cast<size_t>(lp.n_cols));
  for (long j = 0; j < lp.n_cols; ++j) d[static_cast<size_t>(j)] = -lp.obj[static_cast<size_t>(j)];
  double dual_res = 0.0, comp = 0.0;
  double dual_obj = 0.0;
  for (size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    for (const auto& [c, v] : row.terms) d[static_cast<size_t>(c)] += lambda[i] * v;
    double ax = 0.0;
    for (const auto& [c, v] : row.terms) ax += v * x[static_cast<size_t>(c)];
    if (row.sense == '<') {
      dual_res = std::max(dual_res, -lambda[i]);
      comp = std::max(comp, std::abs(lambda[i] * (row.rhs - ax)));
    }
    dual_obj -= lambda[i] * row.rhs;
  }
  for (long j = 0; j < lp.n_cols; ++j) {
    const size_t js = static_cast<size_t>(j);
    const double lo = lp.col_lower[js], up = lp.col_upper[js];
    const double dj = d[js];
    if (!std::isfinite(up)) dual_res = std::max(dual_res, -dj);
    if (!std::isfinite(lo)) dual_res = std::max(dual_res, dj);
    if (dj > 0.0 && std::isfinite(lo)) {
      comp = std::max(comp, std::abs(dj * (x[js] - lo)));
      dual_obj += dj * lo;
    } else if (dj < 0.0 && std::isfinite(up)) {
      comp = std::max(comp, std::abs(dj * (up - x[js])));
      dual_obj += dj * up;
    }
  }
  double primal_obj = 0.0;
  for (long j = 0; j < lp.n_cols; ++j)
    primal_obj -= lp.obj[static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
  cert.dual_residual = dual_res;
  cert.complementarity = comp;
  cert.gap = std::abs(primal_obj - dual_obj);
  cert.pass = cert.primal_residual <= thr && dual_res <= thr && comp <= thr && cert.gap <= thr;
  if (!cert.pass && cert.first_violation.empty()) {
    if (cert.primal_residual > thr) cert.first_violation = "primal residual";
    else if (dual_res > thr) cert.first_violation = "dual residual";
    else if (comp > thr) cert.first_violation = "complementarity";
    else cert.first_violation = "duality gap";
  }
  return cert;
}

/// Solves the LP with the bundled bounded revised simplex.
inline SolveReport solve(const LpProblem& lp, double tol = 1e-9, long max_iter = -1) {
  const auto t_start = std::chrono::steady_clock::now();
  SolveReport rep;
  const long m = static_cast<long>(lp.rows.size());
  if (max_iter < 0) max_iter = 20000 + 60 * (m + lp.n_cols);

  if (m == 0) {
    // boxed problem: each column sits at whichever bound the objective prefers
    rep.primal.assign(static_cast<size_t>(lp.n_cols), 0.0);
    for (long j = 0; j < lp.n_cols; ++j) {
      const size_t js = static_cast<size_t>(j);
      const double c = lp.obj[js];
      double v;
      if (c > 0.0) v = lp.col_upper[js];
      else if (c < 0.0) v = lp.col_lower[js];
      else v = std::isfinite(lp.col_lower[js]) ? lp.col_lower[js] : 0.0;
      if (!std::isfinite(v)) {
        rep.status = SolveStatus::Unbounded;
        return rep;
      }
      rep.primal[js] = v;
      rep.objective += c * v;
    }
    rep.objective += lp.obj_constant;
    rep.row_dual.clear();
    rep.reduced_cost.assign(static_cast<size_t>(lp.n_cols), 0.0);
    for (long j = 0; j < lp.n_cols; ++j)
      rep.reduced_cost[static_cast<size_t>(j)] = -lp.obj[static_cast<size_t>(j)];
    rep.has_duals = true;
    rep.status = SolveStatus::Optimal;
  } else {
    detail::BoundedSimplex simplex(detail::to_standard_form(lp), tol);
    rep.status = simplex.run(max_iter);
    rep.iterations = simplex.iterations();
    rep.infeasible_row = simplex.infeasible_row();
    rep.diagnostic = simplex.diagnostic();
    rep.primal = simplex.structural_primal();
    if (rep.status == SolveStatus::Optimal) {
      rep.objective = -simplex.min_objective() + lp.obj_constant;
      simplex.extract_duals(rep.row_dual, rep.reduced_cost);
      rep.has_duals = true;
    }
  }
  if (rep.status == SolveStatus::Optimal) {
    const OptimalityCertificate cert = verify_optimality(lp, rep, tol);
    rep.max_primal_residual = cert.primal_residual;
    rep.max_dual_residual = cert.dual_residual;
    rep.complementarity_residual = cert.complementarity;
    rep.duality_gap = cert.gap;
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

}  // namespace hes
