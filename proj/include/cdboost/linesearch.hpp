#ifndef CDBOOST_LINESEARCH_HPP
#define CDBOOST_LINESEARCH_HPP

#include <Eigen/Dense>

#include "cdboost/hypothesis.hpp"
#include "cdboost/losses.hpp"

namespace cdboost {

enum class StepRule { exact, quadratic_bound, wolfe };

StepRule step_rule_from_name(std::string_view name);
const char* step_rule_name(StepRule rule);

struct LineSearchConfig {
  StepRule option = StepRule::exact;
  double wolfe_c1 = 1.0 / 3.0;
  double wolfe_c2 = 0.5;
  double root_tolerance = 1e-12;
  double bracket_growth = 2.0;
  int max_bracket_doublings = 200;
};

/// One accepted step.  phi0/phi_alpha are the empirical convex risk before and
/// after, grad_inner the directional derivative at the start.  unbounded_flag
/// marks a structurally unbounded direction resolved by the quadratic-bound
/// step; fallback marks a Wolfe bracket failure resolved the same way.
struct StepRecord {
  double alpha = 0.0;
  int direction_sign = 1;
  int hypothesis_index = -1;
  bool unbounded_flag = false;
  bool fallback = false;
  double phi0 = 0.0;
  double phi_alpha = 0.0;
  double grad_inner = 0.0;
};

/// Mean loss over the sample: (1/m) sum_i loss(margins_i).
double empirical_risk(const Eigen::VectorXd& margin_vec, const LossSpec& spec);

/// phi'(alpha) = (1/m) sum_i loss'(margins_i + alpha*sign*A[i][j]) * sign*A[i][j].
double directional_derivative(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                              int column, int sign, double alpha, const LossSpec& spec);

/// Option 1: unconstrained minimizer along the ray, found by doubling until
/// phi' changes sign and then bisecting.  Directions with no +1 entry in the
/// signed column never see a sign change; they get the quadratic-bound step
/// with unbounded_flag set.
StepRecord search_exact(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                        int column, int sign, const LossSpec& spec,
                        const LineSearchConfig& cfg);

/// Option 2: the guaranteed-valid left endpoint -phi'(0)/B2.
StepRecord search_quadratic_bound(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                                  int column, int sign, const LossSpec& spec,
                                  const LineSearchConfig& cfg);

/// Option 3: doubling from alpha=1 while the sufficient-decrease condition
/// holds and the curvature condition fails, then bisection on the bracket.
/// Throws NumericalError if the doubling cap is hit (callers fall back to the
/// quadratic-bound step).
StepRecord search_wolfe(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                        int column, int sign, const LossSpec& spec,
                        const LineSearchConfig& cfg);

/// Dispatch on cfg.option; Wolfe bracket failures fall back to the
/// quadratic-bound step with the fallback flag set.
StepRecord take_step(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                     int column, int sign, const LossSpec& spec,
                     const LineSearchConfig& cfg);

}  // namespace cdboost

#endif
