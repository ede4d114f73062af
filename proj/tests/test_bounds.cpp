#include <doctest.h>

#include <cmath>

#include "cdboost/bounds.hpp"
#include "cdboost/errors.hpp"

using namespace cdboost;
using bounds::Real;

namespace {

// independent evaluation path for the separable formulas, written against the
// displayed expressions rather than sharing helpers with the implementation
Real threshold_oracle(Real eps, Real gamma, Real delta, Real a, Real rho, const LossSpec& loss) {
  const Real first = 2.0L / (eps * gamma * eps * gamma) * std::log(4.0L / delta);
  const Real second = std::pow(
      24.0L * (Real)loss.b2 * (Real)loss.value_at_zero /
          ((rho * (Real)loss.beta1 * eps * gamma) * (rho * (Real)loss.beta1 * eps * gamma)),
      1.0L / a);
  return std::max(first, second);
}

Real risk_oracle(Real eps, Real vc, long m, Real delta, Real a) {
  const Real cap = (vc + 1.0L) * std::log(2.0L * std::exp((Real)1.0L) * (Real)m) +
                   std::log(8.0L / delta);
  const Real denom = std::pow((Real)m, 1.0L - a);
  return eps + 2.0L * std::sqrt(eps * cap / denom) + 4.0L * cap / denom;
}

}  // namespace

TEST_CASE("separable threshold matches the independent evaluation") {
  bounds::BoundInputs in;
  in.m = 1;
  in.a = 2.0L / 3.0L;
  in.delta = 0.05L;
  in.vc = 2.0L;
  in.epsilon = 0.1L;
  in.gamma = 0.2L;
  in.rho = 1.0L;
  in.loss = LossSpec::logistic();

  const Real got = bounds::separable_sample_threshold(in);
  const Real want = threshold_oracle(0.1L, 0.2L, 0.05L, 2.0L / 3.0L, 1.0L, in.loss);
  CHECK(std::abs(got - want) <= 1e-12L * want);

  // degenerate confidence zeroes the log branch
  in.delta = 4.0L;
  const Real degenerate = bounds::separable_sample_threshold(in);
  const Real second_only = threshold_oracle(0.1L, 0.2L, 4.0L, 2.0L / 3.0L, 1.0L, in.loss);
  CHECK(std::abs(degenerate - second_only) <= 1e-12L * second_only);
}

TEST_CASE("separable risk bound matches the independent evaluation and limits") {
  bounds::BoundInputs in;
  in.a = 2.0L / 3.0L;
  in.delta = 0.05L;
  in.vc = 2.0L;
  in.epsilon = 0.1L;
  in.gamma = 0.2L;
  in.loss = LossSpec::logistic();

  for (long m : {100L, 10000L, 1000000L}) {
    in.m = m;
    const Real got = bounds::separable_risk_bound(in);
    const Real want = risk_oracle(0.1L, 2.0L, m, 0.05L, 2.0L / 3.0L);
    CHECK(std::abs(got - want) <= 1e-12L * want);
  }

  // the bound tends to epsilon as m grows
  in.a = 0.5L;
  in.m = 1000000000000L;
  CHECK(bounds::separable_risk_bound(in) <= 0.1L + 0.01L);

  in.gamma = 0.0L;
  CHECK_THROWS_AS(bounds::separable_risk_bound(in), InputError);
}

TEST_CASE("bound calculators are monotone where the formulas dictate") {
  bounds::BoundInputs in;
  in.a = 0.5L;
  in.delta = 0.1L;
  in.vc = 2.0L;
  in.epsilon = 0.05L;
  in.gamma = 0.3L;
  in.loss = LossSpec::logistic();

  Real prev = 1e30L;
  for (long m : {64L, 256L, 1024L, 4096L, 16384L}) {
    in.m = m;
    const Real v = bounds::separable_risk_bound(in);
    CHECK(v <= prev + 1e-18L);
    prev = v;
  }

  in.m = 4096;
  Real prev_vc = 0.0L;
  for (Real vc : {1.0L, 2.0L, 5.0L, 11.0L}) {
    in.vc = vc;
    const Real v = bounds::separable_risk_bound(in);
    CHECK(v >= prev_vc);
    prev_vc = v;
  }

  in.vc = 2.0L;
  Real prev_delta = 10.0L;
  for (Real delta : {0.01L, 0.05L, 0.25L, 1.0L}) {
    in.delta = delta;
    const Real v = bounds::separable_risk_bound(in);
    CHECK(v <= prev_delta);
    prev_delta = v;
  }
}

TEST_CASE("nonseparable terms: degenerate radii leave only three terms") {
  bounds::NonseparableInputs in;
  in.base.m = 1024;
  in.base.a = 0.5L;
  in.base.delta = 0.1L;
  in.base.vc = 2.0L;
  in.base.loss = LossSpec::logistic();
  in.b1 = 0.01L;
  in.r1 = 1.0L;
  in.r_t_minus_1 = 0.0L;
  in.r_t = 0.0L;
  in.lambda_bar_norm = 3.0L;
  in.inf_term = 0.25L;
  in.empirical_class_risk = 0.0L;

  auto terms = bounds::nonseparable_risk_bound(in);
  CHECK(terms.mcdiarmid_term == 0.0L);
  CHECK(terms.rademacher_term == 0.0L);
  CHECK(terms.inf_term == 0.25L);
  CHECK(terms.horizon_term ==
        doctest::Approx(std::pow(1024.0, -0.125)).epsilon(1e-12));
  CHECK(terms.geometric_term > 0.0L);
  // classification deviation keeps its m-independent-of-risk floor
  CHECK(terms.classification_term > 0.0L);
  const Real sum = terms.inf_term + terms.horizon_term + terms.mcdiarmid_term +
                   terms.rademacher_term + terms.geometric_term + terms.classification_term;
  CHECK(terms.total == sum);
}

TEST_CASE("item-3 deviation shrinks as m^{-(1-a)/2} in its leading term") {
  bounds::NonseparableInputs in;
  in.base.a = 0.5L;
  in.base.delta = 0.1L;
  in.base.vc = 2.0L;
  in.base.loss = LossSpec::logistic();
  in.b1 = 0.01L;
  in.r1 = 0.0L;
  in.r_t = 0.0L;
  in.r_t_minus_1 = 0.0L;
  in.lambda_bar_norm = 0.0L;
  in.empirical_class_risk = 0.09L;

  in.base.m = 4096;
  const Real t1 = bounds::nonseparable_risk_bound(in).classification_term;
  in.base.m = 4096 * 16;
  const Real t2 = bounds::nonseparable_risk_bound(in).classification_term;
  // leading term scales like sqrt(cap/m^{1-a}); with a = 1/2 a 16x larger m
  // halves it modulo the log factor
  CHECK(t2 < t1 / 1.6L);
}

TEST_CASE("psi transform for the logistic loss") {
  const auto spec = LossSpec::logistic();
  CHECK(bounds::psi_inverse(0.0L, spec) == 0.0L);
  CHECK(bounds::psi_inverse(0.02L, spec) == doctest::Approx(0.2).epsilon(1e-15));
  for (Real z : {0.0L, 0.1L, 0.3L, 0.6931L}) {
    CHECK(bounds::psi(bounds::psi_inverse(z, spec), spec) == doctest::Approx((double)z).epsilon(1e-15));
  }
  CHECK_THROWS_AS(bounds::psi_inverse(0.1L, LossSpec::russell()), InputError);
  CHECK_THROWS_AS(bounds::psi_inverse(-0.1L, spec), InputError);
}

TEST_CASE("reweighted margin deviation formula") {
  // exact formula check at pinned values
  const Real v = bounds::reweighted_margin_deviation(2.0L, 3.0L, 2.0L, 100, 0.5L);
  const Real want = 2.0L * 2.0L * 3.0L *
                    (2.0L * std::sqrt(2.0L * 2.0L * std::log(101.0L)) +
                     std::sqrt(2.0L * std::log(2.0L))) /
                    10.0L;
  CHECK(std::abs(v - want) <= 1e-15L * want);

  // m -> 4m halves the bound up to the log factor, asserted as the formula
  const Real at_m = bounds::reweighted_margin_deviation(1.0L, 1.0L, 2.0L, 1000, 0.1L);
  const Real at_4m = bounds::reweighted_margin_deviation(1.0L, 1.0L, 2.0L, 4000, 0.1L);
  const Real log_ratio = std::sqrt(std::log(4001.0L) / std::log(1001.0L));
  CHECK(at_m / at_4m <= 2.0L * log_ratio + 1e-12L);
  CHECK(at_m / at_4m >= 2.0L / log_ratio - 1e-12L);

  CHECK_THROWS_AS(bounds::reweighted_margin_deviation(1.0L, 1.0L, 1.0L, 0, 0.1L), InputError);
}
