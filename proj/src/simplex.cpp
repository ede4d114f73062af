#include "cdboost/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "cdboost/errors.hpp"

namespace cdboost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarState { basic, at_lower, at_upper };

struct Tableau {
  // T = B^-1 [A | artificials], maintained by pivoting.
  Eigen::MatrixXd t;
  Eigen::VectorXd xb;          // values of basic variables by row
  Eigen::VectorXd cost;        // current phase objective coefficients
  Eigen::VectorXd zrow;        // reduced costs, maintained by pivoting
  Eigen::VectorXd lower, upper;
  std::vector<VarState> state;
  std::vector<int> basis;      // variable basic in each row
  long iterations = 0;

  int rows() const { return static_cast<int>(t.rows()); }
  int cols() const { return static_cast<int>(t.cols()); }

  double nonbasic_value(int j) const {
    return state[static_cast<std::size_t>(j)] == VarState::at_upper ? upper[j] : lower[j];
  }

  void rebuild_reduced_costs() {
    Eigen::VectorXd cb(rows());
    for (int i = 0; i < rows(); ++i) cb[i] = cost[basis[static_cast<std::size_t>(i)]];
    zrow = cost - t.transpose() * cb;
    for (int i = 0; i < rows(); ++i) zrow[basis[static_cast<std::size_t>(i)]] = 0.0;
  }

  void pivot(int row, int enter) {
    const double piv = t(row, enter);
    t.row(row) /= piv;
    for (int i = 0; i < rows(); ++i) {
      if (i == row) continue;
      const double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    const double zf = zrow[enter];
    if (zf != 0.0) zrow -= zf * t.row(row).transpose();
  }
};

// One simplex phase on the current cost vector.  Returns optimal or a failure
// status; the tableau is updated in place.
LpStatus iterate(Tableau& tab, double tol, long max_iterations, long bland_after) {
  const int rows = tab.rows();
  const int cols = tab.cols();

  for (;;) {
    if (tab.iterations >= max_iterations) return LpStatus::iteration_limit;
    const bool bland = tab.iterations >= bland_after;

    // entering variable
    int enter = -1;
    int enter_dir = 0;
    double best_violation = tol;
    for (int j = 0; j < cols; ++j) {
      const VarState st = tab.state[static_cast<std::size_t>(j)];
      if (st == VarState::basic) continue;
      const double d = tab.zrow[j];
      double violation = 0.0;
      int dir = 0;
      if (st == VarState::at_lower && d < -tol) {
        violation = -d;
        dir = +1;
      } else if (st == VarState::at_upper && d > tol) {
        violation = d;
        dir = -1;
      } else {
        continue;
      }
      if (bland) {
        enter = j;
        enter_dir = dir;
        break;
      }
      if (violation > best_violation) {
        best_violation = violation;
        enter = j;
        enter_dir = dir;
      }
    }
    if (enter < 0) return LpStatus::optimal;

    // ratio test: first bound hit among basic variables, or a bound flip of
    // the entering variable itself
    const double s = static_cast<double>(enter_dir);
    double theta = kInf;
    int leave_row = -1;
    int leave_to_upper = 0;
    const double flip = tab.upper[enter] - tab.lower[enter];
    if (std::isfinite(flip)) theta = flip;

    for (int i = 0; i < rows; ++i) {
      const double w = s * tab.t(i, enter);
      if (std::abs(w) <= 1e-11) continue;
      const int bi = tab.basis[static_cast<std::size_t>(i)];
      double limit;
      int to_upper;
      if (w > 0.0) {
        limit = (tab.xb[i] - tab.lower[bi]) / w;
        to_upper = 0;
      } else {
        if (!std::isfinite(tab.upper[bi])) continue;
        limit = (tab.xb[i] - tab.upper[bi]) / w;
        to_upper = 1;
      }
      if (limit < -1e-9) limit = 0.0;  // snap feasibility noise
      if (limit < theta - 1e-12 ||
          (limit < theta + 1e-12 && leave_row >= 0 && bland &&
           bi < tab.basis[static_cast<std::size_t>(leave_row)])) {
        theta = std::max(limit, 0.0);
        leave_row = i;
        leave_to_upper = to_upper;
      }
    }

    if (!std::isfinite(theta)) return LpStatus::unbounded;
    ++tab.iterations;

    if (leave_row < 0) {
      // bound flip, no basis change
      tab.state[static_cast<std::size_t>(enter)] =
          enter_dir > 0 ? VarState::at_upper : VarState::at_lower;
      for (int i = 0; i < rows; ++i) tab.xb[i] -= theta * s * tab.t(i, enter);
      continue;
    }

    const int leave = tab.basis[static_cast<std::size_t>(leave_row)];
    const double enter_value = tab.nonbasic_value(enter) + s * theta;
    for (int i = 0; i < rows; ++i) {
      if (i != leave_row) tab.xb[i] -= theta * s * tab.t(i, enter);
    }
    tab.xb[leave_row] = enter_value;
    tab.state[static_cast<std::size_t>(leave)] =
        leave_to_upper ? VarState::at_upper : VarState::at_lower;
    tab.state[static_cast<std::size_t>(enter)] = VarState::basic;
    tab.basis[static_cast<std::size_t>(leave_row)] = enter;
    tab.pivot(leave_row, enter);
  }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, double tol, long max_iterations) {
  const int rows = static_cast<int>(lp.a.rows());
  const int n = static_cast<int>(lp.a.cols());
  if (lp.b.size() != rows || lp.c.size() != n || lp.lower.size() != n || lp.upper.size() != n) {
    throw InputError("solve_lp: inconsistent problem dimensions");
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(lp.lower[j])) throw InputError("solve_lp: lower bounds must be finite");
    if (lp.upper[j] < lp.lower[j]) throw InputError("solve_lp: empty variable bound interval");
  }

  Tableau tab;
  const int total = n + rows;  // structurals then one artificial per row
  tab.t.resize(rows, total);
  tab.t.leftCols(n) = lp.a;
  tab.t.rightCols(rows).setZero();
  tab.lower.resize(total);
  tab.upper.resize(total);
  tab.lower.head(n) = lp.lower;
  tab.upper.head(n) = lp.upper;
  tab.lower.tail(rows).setZero();
  tab.upper.tail(rows).setConstant(kInf);
  tab.state.assign(static_cast<std::size_t>(total), VarState::at_lower);
  tab.basis.resize(static_cast<std::size_t>(rows));
  tab.xb.resize(rows);

  // start from structurals at their lower bounds, artificials absorbing the residual
  Eigen::VectorXd residual = lp.b - lp.a * lp.lower;
  for (int i = 0; i < rows; ++i) {
    const double sgn = residual[i] < 0.0 ? -1.0 : 1.0;
    tab.t(i, n + i) = sgn;
    tab.basis[static_cast<std::size_t>(i)] = n + i;
    tab.state[static_cast<std::size_t>(n + i)] = VarState::basic;
    tab.xb[i] = std::abs(residual[i]);
  }

  const long bland_after = 2L * (rows + total) + 2000;

  // phase 1: drive artificials to zero
  tab.cost = Eigen::VectorXd::Zero(total);
  tab.cost.tail(rows).setOnes();
  tab.rebuild_reduced_costs();
  LpStatus st = iterate(tab, tol, max_iterations, bland_after);
  if (st != LpStatus::optimal) return {st, Eigen::VectorXd(), 0.0, tab.iterations};

  double phase1 = 0.0;
  for (int i = 0; i < rows; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] >= n) phase1 += tab.xb[i];
  }
  if (phase1 > 1e-7 * std::max(1.0, lp.b.cwiseAbs().maxCoeff())) {
    return {LpStatus::infeasible, Eigen::VectorXd(), 0.0, tab.iterations};
  }

  // pivot basic artificials out where possible; freeze them at zero otherwise
  for (int i = 0; i < rows; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (tab.state[static_cast<std::size_t>(j)] != VarState::basic &&
          std::abs(tab.t(i, j)) > 1e-9) {
        enter = j;
        break;
      }
    }
    if (enter >= 0) {
      const int leave = tab.basis[static_cast<std::size_t>(i)];
      const double enter_value = tab.nonbasic_value(enter);  // degenerate pivot: theta = 0
      tab.state[static_cast<std::size_t>(leave)] = VarState::at_lower;
      tab.state[static_cast<std::size_t>(enter)] = VarState::basic;
      tab.basis[static_cast<std::size_t>(i)] = enter;
      tab.xb[i] = enter_value;
      tab.pivot(i, enter);
    }
  }
  for (int k = 0; k < rows; ++k) tab.upper[n + k] = 0.0;

  // phase 2
  tab.cost = Eigen::VectorXd::Zero(total);
  tab.cost.head(n) = lp.c;
  tab.rebuild_reduced_costs();
  st = iterate(tab, tol, max_iterations, bland_after);
  if (st != LpStatus::optimal) return {st, Eigen::VectorXd(), 0.0, tab.iterations};

  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.x.resize(n);
  for (int j = 0; j < n; ++j) sol.x[j] = tab.nonbasic_value(j);
  for (int i = 0; i < rows; ++i) {
    const int bi = tab.basis[static_cast<std::size_t>(i)];
    if (bi < n) sol.x[bi] = tab.xb[i];
  }
  // snap residual bound noise
  for (int j = 0; j < n; ++j) {
    sol.x[j] = std::min(std::max(sol.x[j], lp.lower[j]), lp.upper[j]);
  }
  sol.objective = lp.c.dot(sol.x);
  sol.iterations = tab.iterations;
  return sol;
}

}  // namespace cdboost
