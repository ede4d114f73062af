#include <doctest.h>

#include <cmath>

#include "cdboost/errors.hpp"
#include "cdboost/linesearch.hpp"
#include "cdboost/synthetic.hpp"

using namespace cdboost;

namespace {

MarginMatrix single_column(std::initializer_list<int> entries) {
  MarginMatrix a;
  a.entries.resize(static_cast<Eigen::Index>(entries.size()), 1);
  Eigen::Index i = 0;
  for (int e : entries) a.entries(i++, 0) = static_cast<std::int8_t>(e);
  return a;
}

// finite-difference oracle for the restricted risk derivative
double fd_slope(const MarginMatrix& a, const Eigen::VectorXd& u, int j, int sign, double alpha,
                const LossSpec& spec) {
  const double h = 1e-5;
  const Eigen::VectorXd dir = sign * signed_column(a, j);
  return (empirical_risk(u + (alpha + h) * dir, spec) -
          empirical_risk(u + (alpha - h) * dir, spec)) /
         (2.0 * h);
}

}  // namespace

TEST_CASE("directional derivative at zero with zero coefficients") {
  // phi'(0) = sign * (column mean) * loss'(0)
  auto a = single_column({-1, -1, 1, -1});
  Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
  const double got = directional_derivative(a, u, 0, +1, 0.0, LossSpec::logistic());
  CHECK(got == doctest::Approx(0.5 * (-0.5)).epsilon(1e-12));
}

TEST_CASE("directional derivative matches finite differences on random rays") {
  GeneratorSpec gen;
  gen.kind = GeneratorKind::uniform_noise;
  gen.m = 23;
  gen.seed = 3;
  auto [data, bayes] = generate(gen);
  auto [dict, a] = build_dictionary(data);

  SplitMix64 rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    Eigen::VectorXd u(a.rows());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = 4.0 * rng.next_unit() - 2.0;
    const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(a.cols()));
    const int sign = (rng.next_u64() & 1ull) ? 1 : -1;
    const double alpha = 2.0 * rng.next_unit();
    for (const auto& spec : {LossSpec::logistic(), LossSpec::russell()}) {
      const double got = directional_derivative(a, u, j, sign, alpha, spec);
      CHECK(std::abs(got - fd_slope(a, u, j, sign, alpha, spec)) <= 1e-5);
    }
  }
}

TEST_CASE("single-example tail vanishes") {
  auto a = single_column({-1});
  Eigen::VectorXd u = Eigen::VectorXd::Zero(1);
  const auto spec = LossSpec::logistic();
  CHECK(directional_derivative(a, u, 0, +1, 40.0, spec) ==
        doctest::Approx(-loss_deriv(spec, -40.0)).epsilon(1e-12));
  CHECK(std::abs(directional_derivative(a, u, 0, +1, 60.0, spec)) < 1e-20);
}

TEST_CASE("exact search flags the structurally unbounded direction") {
  auto a = single_column({-1});
  Eigen::VectorXd u = Eigen::VectorXd::Zero(1);
  LineSearchConfig cfg;
  auto rec = search_exact(a, u, 0, +1, LossSpec::logistic(), cfg);
  CHECK(rec.unbounded_flag);
  // fallback step -phi'(0)/B2 = (1/2)/(1/4) = 2 at lambda = 0
  CHECK(rec.alpha == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rec.phi_alpha <= rec.phi0);
}

TEST_CASE("exact search rejects non-descent directions") {
  auto a = single_column({-1, 1});
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2);
  LineSearchConfig cfg;
  // phi'(alpha) = (loss'(alpha) - loss'(-alpha))/2 has its root at 0
  CHECK_THROWS_AS(search_exact(a, u, 0, +1, LossSpec::logistic(), cfg), InputError);
}

TEST_CASE("exact search finds the stationary point") {
  GeneratorSpec gen;
  gen.kind = GeneratorKind::nightmare2;
  gen.m = 40;
  gen.seed = 21;
  auto [data, bayes] = generate(gen);
  auto [dict, a] = build_dictionary(data);
  LineSearchConfig cfg;

  SplitMix64 rng(5);
  int tested = 0;
  for (int j = 0; j < static_cast<int>(a.cols()) && tested < 8; ++j) {
    Eigen::VectorXd u(a.rows());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = 2.0 * rng.next_unit() - 1.0;
    for (const auto& spec : {LossSpec::logistic(), LossSpec::russell()}) {
      const double slope0 = directional_derivative(a, u, j, +1, 0.0, spec);
      const bool bounded = (a.entries.col(j).array() > 0).any();
      if (slope0 >= 0.0 || !bounded) continue;
      auto rec = search_exact(a, u, j, +1, spec, cfg);
      CHECK(!rec.unbounded_flag);
      CHECK(std::abs(directional_derivative(a, u, j, +1, rec.alpha, spec)) <= 10.0 * cfg.root_tolerance);
      CHECK(rec.phi_alpha <= rec.phi0);
      ++tested;
    }
  }
  CHECK(tested >= 4);
}

TEST_CASE("quadratic bound step is the left endpoint") {
  auto a = single_column({-1, -1, -1});
  Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
  LineSearchConfig cfg;

  auto rec = search_quadratic_bound(a, u, 0, +1, LossSpec::logistic(), cfg);
  CHECK(rec.alpha == doctest::Approx(2.0).epsilon(1e-12));  // (1/2)/(1/4)

  auto russ = search_quadratic_bound(a, u, 0, +1, LossSpec::russell(), cfg);
  CHECK(russ.alpha == doctest::Approx(1.0).epsilon(1e-12));  // B2 = 1

  CHECK_THROWS_AS(search_quadratic_bound(a, u, 0, +1, LossSpec::exponential(), cfg), InputError);
}

TEST_CASE("quadratic bound step never exceeds the exact minimizer") {
  GeneratorSpec gen;
  gen.kind = GeneratorKind::nightmare2;
  gen.m = 30;
  gen.seed = 9;
  auto [data, bayes] = generate(gen);
  auto [dict, a] = build_dictionary(data);
  LineSearchConfig cfg;

  SplitMix64 rng(13);
  for (int rep = 0; rep < 30; ++rep) {
    Eigen::VectorXd u(a.rows());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = 2.0 * rng.next_unit() - 1.0;
    const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(a.cols()));
    const auto spec = LossSpec::logistic();
    const double slope0 = directional_derivative(a, u, j, +1, 0.0, spec);
    if (slope0 >= 0.0) continue;
    auto exact = search_exact(a, u, j, +1, spec, cfg);
    if (exact.unbounded_flag) continue;
    auto qb = search_quadratic_bound(a, u, j, +1, spec, cfg);
    CHECK(qb.alpha <= exact.alpha + 1e-9);
  }
}

TEST_CASE("wolfe step satisfies both conditions post-hoc") {
  GeneratorSpec gen;
  gen.kind = GeneratorKind::nightmare2;
  gen.m = 25;
  gen.seed = 2;
  auto [data, bayes] = generate(gen);
  auto [dict, a] = build_dictionary(data);
  LineSearchConfig cfg;

  SplitMix64 rng(31);
  int tested = 0;
  for (int rep = 0; rep < 60 && tested < 20; ++rep) {
    Eigen::VectorXd u(a.rows());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = 2.0 * rng.next_unit() - 1.0;
    const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(a.cols()));
    for (const auto& spec : {LossSpec::logistic(), LossSpec::russell()}) {
      const double slope0 = directional_derivative(a, u, j, +1, 0.0, spec);
      if (slope0 >= 0.0) continue;
      auto rec = search_wolfe(a, u, j, +1, spec, cfg);
      const double phi0 = empirical_risk(u, spec);
      const double phi = empirical_risk(u + rec.alpha * signed_column(a, j), spec);
      CHECK(phi <= phi0 + rec.alpha * cfg.wolfe_c1 * slope0 + 1e-12);
      CHECK(directional_derivative(a, u, j, +1, rec.alpha, spec) >=
            cfg.wolfe_c2 * slope0 - 1e-12);
      ++tested;
    }
  }
  CHECK(tested >= 10);
}

TEST_CASE("wolfe returns a finite step on the one-example unbounded direction") {
  auto a = single_column({-1});
  Eigen::VectorXd u = Eigen::VectorXd::Zero(1);
  LineSearchConfig cfg;
  const auto spec = LossSpec::logistic();
  auto rec = search_wolfe(a, u, 0, +1, spec, cfg);
  CHECK(rec.alpha > 0.0);
  CHECK(std::isfinite(rec.alpha));

  // and the search honors the doubling schedule: alpha is the first power of
  // the growth factor at which the curvature condition turns true
  double expect = 1.0;
  const double slope0 = directional_derivative(a, u, 0, +1, 0.0, spec);
  while (directional_derivative(a, u, 0, +1, expect, spec) < cfg.wolfe_c2 * slope0) {
    expect *= cfg.bracket_growth;
  }
  CHECK(rec.alpha == doctest::Approx(expect));
}

TEST_CASE("per-step decrease guarantee across all options") {
  GeneratorSpec gen;
  gen.kind = GeneratorKind::nightmare2;
  gen.m = 20;
  gen.seed = 77;
  auto [data, bayes] = generate(gen);
  auto [dict, a] = build_dictionary(data);
  LineSearchConfig cfg;

  for (const auto rule : {StepRule::exact, StepRule::quadratic_bound, StepRule::wolfe}) {
    cfg.option = rule;
    for (const auto& spec : {LossSpec::logistic(), LossSpec::russell()}) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(a.rows());
      // one selection sweep by hand: best column of the gradient image
      Eigen::VectorXd g(a.rows());
      for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = loss_deriv(spec, u[i]);
      const Eigen::VectorXd scores = adjoint_apply(a, g);
      Eigen::Index best = 0;
      scores.cwiseAbs().maxCoeff(&best);
      const int sign = scores[best] > 0 ? -1 : +1;

      auto rec = take_step(a, u, static_cast<int>(best), sign, spec, cfg);
      const double sup = sup_norm(scores);
      CHECK(rec.phi0 - rec.phi_alpha >= sup * sup / (6.0 * spec.b2) - 1e-9);
    }
  }
}
