#include <doctest.h>

#include <cmath>
#include <vector>

#include "cdboost/errors.hpp"
#include "cdboost/simplex.hpp"
#include "cdboost/synthetic.hpp"

using namespace cdboost;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LinearProgram make_lp(int rows, int cols) {
  LinearProgram lp;
  lp.a = Eigen::MatrixXd::Zero(rows, cols);
  lp.b = Eigen::VectorXd::Zero(rows);
  lp.c = Eigen::VectorXd::Zero(cols);
  lp.lower = Eigen::VectorXd::Zero(cols);
  lp.upper = Eigen::VectorXd::Constant(cols, kInf);
  return lp;
}

// brute-force oracle: sample the feasible box densely and keep the best point
// satisfying the equalities (only usable when every variable is boxed)
double box_grid_min(const LinearProgram& lp, int steps) {
  const int n = static_cast<int>(lp.a.cols());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double best = kInf;
  for (;;) {
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) {
      x[j] = lp.lower[j] + (lp.upper[j] - lp.lower[j]) * idx[static_cast<std::size_t>(j)] / steps;
    }
    if ((lp.a * x - lp.b).cwiseAbs().maxCoeff() <= 1e-9) {
      best = std::min(best, lp.c.dot(x));
    }
    int j = 0;
    while (j < n && ++idx[static_cast<std::size_t>(j)] > steps) {
      idx[static_cast<std::size_t>(j)] = 0;
      ++j;
    }
    if (j == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("simplex solves a textbook problem") {
  // min -x1 - 2 x2 s.t. x1 + x2 + s1 = 4, x1 + 3 x2 + s2 = 6
  auto lp = make_lp(2, 4);
  lp.a << 1, 1, 1, 0, 1, 3, 0, 1;
  lp.b << 4, 6;
  lp.c << -1, -2, 0, 0;
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.objective == doctest::Approx(-5.0).epsilon(1e-9));
  CHECK(sol.x[0] == doctest::Approx(3.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));
}

TEST_CASE("simplex honors upper bounds") {
  // min -x1 - x2 s.t. x1 + x2 = 1.5, x in [0,1]^2
  auto lp = make_lp(1, 2);
  lp.a << 1, 1;
  lp.b << 1.5;
  lp.c << -2, -1;
  lp.upper = Eigen::VectorXd::Ones(2);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(0.5));
}

TEST_CASE("simplex detects infeasibility") {
  auto lp = make_lp(1, 2);
  lp.a << 1, 1;
  lp.b << 5.0;
  lp.upper = Eigen::VectorXd::Ones(2);
  auto sol = solve_lp(lp);
  CHECK(sol.status == LpStatus::infeasible);
}

TEST_CASE("simplex detects unboundedness") {
  // min -x1 with x1 free upward
  auto lp = make_lp(1, 2);
  lp.a << 1, -1;
  lp.b << 0.0;
  lp.c << -1, 0;
  auto sol = solve_lp(lp);
  CHECK(sol.status == LpStatus::unbounded);
}

TEST_CASE("degenerate equality blocks are handled") {
  // duplicated rows create degenerate bases
  auto lp = make_lp(3, 3);
  lp.a << 1, 1, 0, 1, 1, 0, 0, 1, 1;
  lp.b << 1, 1, 1;
  lp.c << 1, 2, -1;
  lp.upper = Eigen::VectorXd::Constant(3, 2.0);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  // x = (1, 0, 1) attains c'x = 0; check optimality by brute force
  CHECK(sol.objective == doctest::Approx(box_grid_min(lp, 40)).epsilon(1e-6));
}

TEST_CASE("random boxed LPs match the grid oracle") {
  SplitMix64 rng(99);
  int solved = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 3;
    auto lp = make_lp(1, n);
    for (int j = 0; j < n; ++j) {
      lp.a(0, j) = 1.0;
      lp.c[j] = std::floor((2.0 * rng.next_unit() - 1.0) * 8.0) / 4.0;
      lp.upper[j] = 1.0;
    }
    lp.b << 1.0;  // simplex over the box
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    const double oracle = box_grid_min(lp, 50);
    CHECK(sol.objective <= oracle + 1e-9);
    CHECK(sol.objective >= oracle - 0.05);  // grid resolution slack
    ++solved;
  }
  CHECK(solved == 40);
}

TEST_CASE("dimension mismatches are rejected") {
  auto lp = make_lp(1, 2);
  lp.c.resize(3);
  CHECK_THROWS_AS(solve_lp(lp), InputError);
}
