#ifndef CDBOOST_DUALITY_HPP
#define CDBOOST_DUALITY_HPP

#include <Eigen/Dense>
#include <vector>

#include "cdboost/boosting.hpp"
#include "cdboost/hypothesis.hpp"
#include "cdboost/losses.hpp"

namespace cdboost {

/// Dual certificate built from the gradient image p_i = loss'((A lambda)_i).
/// dual_value = -(1/m) sum conjugate(p_i) lower-bounds the attainable risk up
/// to the feasibility violation ||A^T p / m||_inf; at a stationary point the
/// violation vanishes and gap == primal - dual tends to zero.
struct DualCertificate {
  Eigen::VectorXd weights;
  double dual_value = 0.0;
  double feasibility_violation = 0.0;
  double primal_value = 0.0;
  double gap = 0.0;
};

/// Curvature constants derived from a nonseparable certificate.
/// radius() = R_i grows as sqrt(i).
struct CurvatureBundle {
  double tau = 0.0;
  double c = 0.0;
  double b1 = 0.0;
  double r1 = 0.0;
  double p_inf_norm = 0.0;

  double radius(long i) const { return std::sqrt(static_cast<double>(i)) * r1; }
};

DualCertificate dual_certificate(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                                 const LossSpec& spec);

/// tau = conjugate_inverse(-dual_value)/2, c and B1 by the explicit formulas,
/// R_i = sqrt(i) * sqrt(loss(0) * max{5, 2*B2/B1} / (rho^2 * B1)).
/// Requires a twice-differentiable Lipschitz loss and dual_value > 0
/// (nonseparable evidence); throws InputError otherwise.  R_1 is computed in
/// log space since B1 can be subnormal-small for wide margin windows.
CurvatureBundle curvature_bundle(const DualCertificate& cert, const LossSpec& spec, double rho);

/// Minimum of loss'' over [-c, c]; closed form at the interval edge for the
/// logistic loss (loss'' is even and unimodal).
double min_second_deriv_on_window(const LossSpec& spec, double c);

struct StepBoundRow {
  long t = 0;
  double alpha = 0.0;
  double l1_norm = 0.0;
  double sqrt_scaled_rms = 0.0;  // sqrt(t) * sqrt(sum_{j<=t} alpha_j^2)
  double radius = 0.0;           // R_t when a bundle is given, else NaN
  double b1_hat = 0.0;           // measured curvature floor along the step
  double alpha_sq = 0.0;
  double alpha_sq_bound = 0.0;   // with the measured curvature
  bool norm_chain_ok = false;
  bool alpha_bound_ok = false;
  bool window_certified = false;  // enough small margins for the bundle's B1
};

struct StepBoundReport {
  std::vector<StepBoundRow> rows;
  bool all_norm_chain_ok = true;
  bool all_alpha_bounds_ok = true;
};

/// Replays the trajectory's steps against the margin matrix and verifies, per
/// iteration, the Cauchy-Schwarz norm chain and the squared-step upper bound.
/// The curvature floor B1_hat is (1/m) sum_i min(loss'' at the step's start
/// margin, loss'' at its end margin), a valid lower bound for the mean
/// curvature anywhere along the segment when loss'' is unimodal.  bundle may
/// be null; when given, rows also compare against R_t and record whether the
/// [-c, c] window held enough mass to certify the theoretical B1.
StepBoundReport check_step_bounds(const MarginMatrix& a,
                                  const std::vector<TrajectoryRecord>& trajectory,
                                  const CurvatureBundle* bundle, const LossSpec& spec,
                                  double rho);

struct GeometricRateReport {
  double c3 = 0.0;          // min_t ||A^T grad(lambda_{t-1})||_inf / alpha_t
  double exponent = 0.0;    // c3 * rho^2 / (6*B2)
  double lhs = 0.0;         // final risk minus reference risk
  double rhs = 0.0;         // geometric envelope
  double reference_risk = 0.0;
  double alpha_sum = 0.0;
  bool holds = false;
};

/// Checks the geometric decay envelope against a strictly better reference
/// weighting.  Throws InputError when the reference is not strictly better.
GeometricRateReport geometric_rate_check(const MarginMatrix& a,
                                         const std::vector<TrajectoryRecord>& trajectory,
                                         const CoefficientVector& reference,
                                         const LossSpec& spec, double rho);

}  // namespace cdboost

#endif
