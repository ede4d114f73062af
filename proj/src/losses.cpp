#include "cdboost/losses.hpp"

#include <algorithm>
#include <cmath>

#include "cdboost/errors.hpp"

namespace cdboost {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kExpClamp = 700.0;  // exp() overflows just above 709

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}
}  // namespace

LossSpec LossSpec::logistic() {
  return {LossKind::logistic, 0.5, 1.0, 0.25, std::log(2.0), 0.5, true};
}

LossSpec LossSpec::exponential() {
  return {LossKind::exponential, kInf, kInf, kInf, 1.0, 1.0, true};
}

LossSpec LossSpec::russell() {
  return {LossKind::russell, 1.0, 1.0, 1.0, 0.5, 1.0, false};
}

LossSpec LossSpec::from_name(std::string_view name) {
  if (name == "logistic") return logistic();
  if (name == "exponential") return exponential();
  if (name == "russell") return russell();
  throw InputError("unknown loss '" + std::string(name) +
                   "' (expected logistic|exponential|russell)");
}

const char* LossSpec::name() const {
  switch (kind) {
    case LossKind::logistic: return "logistic";
    case LossKind::exponential: return "exponential";
    case LossKind::russell: return "russell";
  }
  return "?";
}

void require_lipschitz_smooth(const LossSpec& spec, const char* op) {
  if (!spec.lipschitz_smooth()) {
    throw InputError(std::string(op) + ": loss '" + spec.name() +
                     "' has no finite Lipschitz constants");
  }
}

void require_twice_differentiable(const LossSpec& spec, const char* op) {
  if (!spec.twice_differentiable) {
    throw InputError(std::string(op) + ": loss '" + spec.name() +
                     "' is not twice differentiable");
  }
}

double loss_value(const LossSpec& spec, double z) {
  switch (spec.kind) {
    case LossKind::logistic:
      // ln(1+e^z), overflow-safe on both tails
      if (z > 30.0) return z + std::log1p(std::exp(-z));
      return std::log1p(std::exp(z));
    case LossKind::exponential:
      return std::exp(std::min(z, kExpClamp));
    case LossKind::russell:
      if (z <= -1.0) return 0.0;
      if (z < 0.0) return 0.5 * (z + 1.0) * (z + 1.0);
      return z + 0.5;
  }
  return 0.0;
}

double loss_deriv(const LossSpec& spec, double z) {
  switch (spec.kind) {
    case LossKind::logistic:
      return sigmoid(z);
    case LossKind::exponential:
      return std::exp(std::min(z, kExpClamp));
    case LossKind::russell:
      if (z <= -1.0) return 0.0;
      if (z < 0.0) return z + 1.0;
      return 1.0;
  }
  return 0.0;
}

double loss_second_deriv(const LossSpec& spec, double z) {
  switch (spec.kind) {
    case LossKind::logistic:
      // sigma(z) * sigma(-z); this form avoids cancellation on the tails
      return sigmoid(z) * sigmoid(-z);
    case LossKind::exponential:
      return std::exp(std::min(z, kExpClamp));
    case LossKind::russell:
      // left-limit convention at the kinks -1 and 0
      if (z <= -1.0) return 0.0;
      if (z <= 0.0) return 1.0;
      return 0.0;
  }
  return 0.0;
}

double conjugate(const LossSpec& spec, double phi) {
  if (phi < 0.0) return kInf;
  switch (spec.kind) {
    case LossKind::logistic: {
      if (phi > 1.0) return kInf;
      double v = 0.0;
      if (phi > 0.0) v += phi * std::log(phi);
      if (phi < 1.0) v += (1.0 - phi) * std::log1p(-phi);
      return v;
    }
    case LossKind::exponential:
      if (phi == 0.0) return 0.0;
      return phi * std::log(phi) - phi;
    case LossKind::russell:
      if (phi > 1.0) return kInf;
      return 0.5 * phi * phi - phi;
  }
  return kInf;
}

double conjugate_inverse(const LossSpec& spec, double r) {
  const double r_lo = -spec.value_at_zero;
  if (r < r_lo - 1e-12 || r > 1e-12) {
    throw InputError("conjugate_inverse: value outside [-loss(0), 0]");
  }
  r = std::clamp(r, r_lo, 0.0);

  // conjugate() is strictly decreasing on [0, deriv_at_zero]; bisect to the
  // width limit so the flat bottom near deriv_at_zero is still resolved.
  double lo = 0.0;
  double hi = spec.deriv_at_zero;
  if (r == 0.0) return 0.0;
  if (r == r_lo) return hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (conjugate(spec, mid) > r) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
  }
  const double phi = 0.5 * (lo + hi);
  return phi;
}

}  // namespace cdboost
