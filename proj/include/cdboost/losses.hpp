#ifndef CDBOOST_LOSSES_HPP
#define CDBOOST_LOSSES_HPP

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace cdboost {

enum class LossKind { logistic, exponential, russell };

/// A margin loss together with the constants the optimizer and the bound
/// calculators consume.  Instances are immutable value types; share freely
/// across threads.
///
/// beta1/beta2 are the one-sided and global Lipschitz constants of the loss,
/// b2 the Lipschitz constant of its derivative.  The exponential loss carries
/// +inf markers and is rejected by every operation that needs them finite.
struct LossSpec {
  LossKind kind;
  double beta1;
  double beta2;
  double b2;
  double value_at_zero;
  double deriv_at_zero;
  bool twice_differentiable;

  static LossSpec logistic();
  static LossSpec exponential();
  static LossSpec russell();
  static LossSpec from_name(std::string_view name);

  const char* name() const;

  // True for losses with finite Lipschitz constants on both the value and the
  // gradient (logistic and russell; not exponential).
  bool lipschitz_smooth() const { return std::isfinite(b2); }
};

// Throws InputError if the loss lacks finite Lipschitz constants.
void require_lipschitz_smooth(const LossSpec& spec, const char* op);
// Throws InputError if the loss is not twice continuously differentiable.
void require_twice_differentiable(const LossSpec& spec, const char* op);

double loss_value(const LossSpec& spec, double z);
double loss_deriv(const LossSpec& spec, double z);

// Second derivative.  The piecewise-quadratic loss takes the left-limit value
// at its two kink points, so loss_second_deriv(russell, -1) == 0 and
// loss_second_deriv(russell, 0) == 1.
double loss_second_deriv(const LossSpec& spec, double z);

/// Fenchel conjugate sup_x {phi*x - loss(x)}.  Returns +inf outside
/// [0, beta2]; for the logistic loss this is the two-point entropy
/// phi*ln(phi) + (1-phi)*ln(1-phi) with 0*ln(0) == 0.
double conjugate(const LossSpec& spec, double phi);

/// Inverse of the conjugate along [0, deriv_at_zero], where it is a strictly
/// decreasing bijection onto [-value_at_zero, 0].  Bisection; the result phi
/// satisfies |conjugate(phi) - r| <= 1e-10 and is located to ~1e-15 in phi.
/// Throws InputError if r lies outside [-value_at_zero, 0] beyond 1e-12 slack.
double conjugate_inverse(const LossSpec& spec, double r);

}  // namespace cdboost

#endif
