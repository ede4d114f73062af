#ifndef CDBOOST_SIMPLEX_HPP
#define CDBOOST_SIMPLEX_HPP

#include <Eigen/Dense>

namespace cdboost {

/// min c'x  subject to  a x = b,  lower <= x <= upper.
/// Lower bounds must be finite; upper bounds may be +inf.
struct LinearProgram {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::VectorXd x;
  double objective = 0.0;
  long iterations = 0;
};

/// Dense two-phase primal simplex with the upper-bounding technique.
/// Dantzig pricing with a permanent switch to Bland's rule once the iteration
/// count suggests cycling.  Built for desk-scale problems where exactness of
/// the optimum matters more than speed.
LpSolution solve_lp(const LinearProgram& lp, double tol = 1e-9, long max_iterations = 200000);

}  // namespace cdboost

#endif
