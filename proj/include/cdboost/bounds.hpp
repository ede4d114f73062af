#ifndef CDBOOST_BOUNDS_HPP
#define CDBOOST_BOUNDS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "cdboost/errors.hpp"
#include "cdboost/losses.hpp"

// Finite-sample bound calculators.  These are formula evaluators, not
// statistical tests: population quantities (the weak-learning rate of the
// source, the attainable risk) are caller-supplied estimates.  Everything
// computes in long double because the nonseparable constants blow past the
// double range for realistic curvature windows.

namespace cdboost::bounds {

using Real = long double;

struct BoundInputs {
  long m = 0;
  Real a = 0.5L;        // stopping exponent
  Real delta = 0.05L;   // confidence
  Real vc = 0.0L;       // VC dimension of the stump class
  Real epsilon = 0.0L;  // target error (separable case)
  Real gamma = 0.0L;    // relaxed weak-learning rate estimate
  Real rho = 1.0L;      // selection slack
  LossSpec loss = LossSpec::logistic();

  void validate() const {
    if (m < 1) throw InputError("bounds: m must be >= 1");
    if (!(a > 0.0L && a < 1.0L)) throw InputError("bounds: a must lie in (0,1)");
    if (!(delta > 0.0L)) throw InputError("bounds: delta must be positive");
    if (vc < 0.0L) throw InputError("bounds: vc must be nonnegative");
  }
};

// (V+1) ln(2em) + ln(k/delta), with ln(2em) = ln(2m) + 1
inline Real capacity_term(Real vc, long m, Real k_over_delta_log_arg) {
  return (vc + 1.0L) * (std::log(2.0L * static_cast<Real>(m)) + 1.0L) +
         std::log(k_over_delta_log_arg);
}

/// Sample size above which the separable-case guarantee engages:
/// max{ 2 ln(4/delta) / (eps*gamma)^2,
///      (24 B2 loss(0) / (rho beta1 eps gamma)^2)^(1/a) }.
inline Real separable_sample_threshold(const BoundInputs& in) {
  in.validate();
  if (!(in.gamma > 0.0L)) throw InputError("separable_sample_threshold: gamma must be positive");
  if (!(in.epsilon > 0.0L)) throw InputError("separable_sample_threshold: epsilon must be positive");
  const Real eg = in.epsilon * in.gamma;
  const Real log_term = std::log(4.0L / in.delta);
  const Real first = 2.0L / (eg * eg) * std::max(log_term, 0.0L);
  const Real denom = in.rho * static_cast<Real>(in.loss.beta1) * eg;
  const Real base = 24.0L * static_cast<Real>(in.loss.b2) *
                    static_cast<Real>(in.loss.value_at_zero) / (denom * denom);
  const Real second = std::pow(base, 1.0L / in.a);
  return std::max(first, second);
}

/// eps + 2 sqrt(eps * cap / m^(1-a)) + 4 * cap / m^(1-a),
/// cap = (V+1) ln(2em) + ln(8/delta).
inline Real separable_risk_bound(const BoundInputs& in) {
  in.validate();
  if (!(in.gamma > 0.0L)) throw InputError("separable_risk_bound: gamma must be positive");
  const Real cap = capacity_term(in.vc, in.m, 8.0L / in.delta);
  const Real denom = std::pow(static_cast<Real>(in.m), 1.0L - in.a);
  return in.epsilon + 2.0L * std::sqrt(in.epsilon * cap / denom) + 4.0L * cap / denom;
}

struct NonseparableTerms {
  Real inf_term = 0.0L;        // caller-supplied attainable-risk estimate
  Real horizon_term = 0.0L;    // m^(-a/4)
  Real mcdiarmid_term = 0.0L;  // R_{t-1} sqrt(2 ln(6/delta) / m)
  Real rademacher_term = 0.0L; // (2 beta2 R_t / sqrt(m)) (2 sqrt(2V ln(m+1)) + loss(R_t) sqrt(2 ln(6/delta)))
  Real geometric_term = 0.0L;  // loss(0) * ratio^(9 B2/(B1 rho^3))
  Real classification_term = 0.0L;  // item-3 deviation with ln(24/delta)
  Real total = 0.0L;

  std::vector<std::pair<std::string, Real>> breakdown() const {
    return {{"inf_term", inf_term},
            {"horizon_term", horizon_term},
            {"mcdiarmid_term", mcdiarmid_term},
            {"rademacher_term", rademacher_term},
            {"geometric_term", geometric_term},
            {"classification_term", classification_term},
            {"total", total}};
  }
};

struct NonseparableInputs {
  BoundInputs base;
  Real b1 = 0.0L;              // curvature floor from the bundle
  Real r1 = 0.0L;              // R_1
  Real r_t_minus_1 = 0.0L;     // R_{t-1}
  Real r_t = 0.0L;             // R_t
  Real lambda_bar_norm = 0.0L; // reference weighting norm
  Real inf_term = 0.0L;        // attainable-risk estimate (labeled estimate)
  Real empirical_class_risk = 0.0L;  // plugged into the item-3 deviation
};

/// Every additive term of the nonseparable risk display plus the
/// classification deviation, with a per-term breakdown.
inline NonseparableTerms nonseparable_risk_bound(const NonseparableInputs& in) {
  in.base.validate();
  if (!(in.b1 > 0.0L)) throw InputError("nonseparable_risk_bound: B1 must be positive");
  const Real m = static_cast<Real>(in.base.m);
  const LossSpec& loss = in.base.loss;

  NonseparableTerms out;
  out.inf_term = in.inf_term;
  out.horizon_term = std::pow(m, -in.base.a / 4.0L);
  const Real log6 = std::sqrt(2.0L * std::log(6.0L / in.base.delta));
  out.mcdiarmid_term = in.r_t_minus_1 * log6 / std::sqrt(m);

  const Real loss_at_rt = static_cast<Real>(loss_value(loss, static_cast<double>(
      std::min(in.r_t, static_cast<Real>(1e300)))));
  out.rademacher_term =
      (2.0L * static_cast<Real>(loss.beta2) * in.r_t / std::sqrt(m)) *
      (2.0L * std::sqrt(2.0L * in.base.vc * std::log(m + 1.0L)) + loss_at_rt * log6);

  const Real denom = in.lambda_bar_norm +
                     in.base.rho * std::pow(m, in.base.a / 4.0L) /
                         (4.0L * static_cast<Real>(loss.b2) * in.r1);
  const Real ratio = denom > 0.0L ? in.lambda_bar_norm / denom : 0.0L;
  const Real exponent = 9.0L * static_cast<Real>(loss.b2) /
                        (in.b1 * in.base.rho * in.base.rho * in.base.rho);
  out.geometric_term =
      static_cast<Real>(loss.value_at_zero) * (ratio > 0.0L ? std::pow(ratio, exponent) : 0.0L);

  const Real cap = capacity_term(in.base.vc, in.base.m, 24.0L / in.base.delta);
  const Real m_pow = std::pow(m, 1.0L - in.base.a);
  out.classification_term = 4.0L * std::sqrt(in.empirical_class_risk * cap / m_pow) +
                            8.0L * cap / m_pow;

  out.total = out.inf_term + out.horizon_term + out.mcdiarmid_term + out.rademacher_term +
              out.geometric_term + out.classification_term;
  return out;
}

/// Calibration transform for the logistic loss: an excess convex risk of z
/// bounds the excess classification risk by sqrt(2z).
inline Real psi_inverse(Real excess_convex_risk, const LossSpec& spec) {
  if (spec.kind != LossKind::logistic) {
    throw InputError("psi transform is only available for the logistic loss");
  }
  if (excess_convex_risk < 0.0L) throw InputError("psi_inverse: excess risk must be >= 0");
  return std::sqrt(2.0L * excess_convex_risk);
}

inline Real psi(Real excess_class_risk, const LossSpec& spec) {
  if (spec.kind != LossKind::logistic) {
    throw InputError("psi transform is only available for the logistic loss");
  }
  return excess_class_risk * excess_class_risk / 2.0L;
}

/// Deviation envelope for margins reweighted by a fixed bounded p over the
/// l1 ball of radius C: 2 C ||p||_inf (2 sqrt(2V ln(m+1)) + sqrt(2 ln(1/delta))) / sqrt(m).
inline Real reweighted_margin_deviation(Real c, Real p_inf_norm, Real vc, long m, Real delta) {
  if (m < 1) throw InputError("reweighted_margin_deviation: m must be >= 1");
  if (!(delta > 0.0L && delta <= 1.0L)) {
    throw InputError("reweighted_margin_deviation: delta must lie in (0,1]");
  }
  const Real mm = static_cast<Real>(m);
  return 2.0L * c * p_inf_norm *
         (2.0L * std::sqrt(2.0L * vc * std::log(mm + 1.0L)) + std::sqrt(2.0L * std::log(1.0L / delta))) /
         std::sqrt(mm);
}

}  // namespace cdboost::bounds

#endif
