#ifndef CDBOOST_WEAKLEARN_HPP
#define CDBOOST_WEAKLEARN_HPP

#include <Eigen/Dense>

#include "cdboost/hypothesis.hpp"
#include "cdboost/simplex.hpp"

namespace cdboost {

/// Nonnegative per-example weights p with (1/m) sum p_i = 1 and
/// max p_i <= 1/epsilon; the discrete form of the capped density set.
struct Density {
  Eigen::VectorXd weights;
  double epsilon = 1.0;

  // Throws InputError when the normalization or cap is violated beyond 1e-9.
  void validate() const;
};

struct WeakLearnRateResult {
  double gamma = 0.0;
  Density optimal_density;
  LpStatus lp_status = LpStatus::optimal;
  long iterations = 0;
};

/// Relaxed weak-learning rate of the sample: the minimum over capped
/// densities p of ||A^T p / m||_inf, solved exactly as the LP
///   min t  s.t.  -t <= (1/m) sum_i p_i A[i][j] <= t,  0 <= p_i <= 1/eps,
///                (1/m) sum_i p_i = 1.
/// epsilon = 0 is accepted; the cap becomes p_i <= m, which the
/// normalization forces anyway.  On simplex cycling a deterministically
/// perturbed retry runs first; persistent failure throws NumericalError.
WeakLearnRateResult gamma_lp(const MarginMatrix& a, double epsilon);

/// Closed-form minimizer of (1/m) sum_i p_i margin_i over the capped density
/// set: full cap 1/eps on margins strictly below the critical atom, a
/// fractional weight shared equally among atoms equal to it, zero above.
Density inner_dual_density(const Eigen::VectorXd& margin_vec, double epsilon);

/// Value of the objective the inner dual density minimizes.
double density_objective(const Density& d, const Eigen::VectorXd& margin_vec);

/// One-sided deviation bound: gamma_mu_estimate - (1/eps) sqrt(ln(2/delta)/(2m)).
double gamma_deviation_bound(double gamma_mu_estimate, double epsilon, long m, double delta);

}  // namespace cdboost

#endif
