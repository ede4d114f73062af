#include "cdboost/weaklearn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "cdboost/errors.hpp"

namespace cdboost {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void Density::validate() const {
  const double m = static_cast<double>(weights.size());
  if (m == 0.0) throw InputError("density over an empty sample");
  if (weights.minCoeff() < -1e-9) throw InputError("density has negative weights");
  if (std::abs(weights.sum() / m - 1.0) > 1e-9) {
    throw InputError("density mean differs from 1 beyond tolerance");
  }
  const double cap = epsilon > 0.0 ? 1.0 / epsilon : m;
  if (weights.maxCoeff() > cap + 1e-9) {
    throw InputError("density exceeds the 1/epsilon cap");
  }
}

namespace {

LinearProgram gamma_program(const MarginMatrix& a, double cap, double cost_perturbation) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const double inv_m = 1.0 / static_cast<double>(m);

  // variables: p_1..p_m, t, s+_1..s+_n, s-_1..s-_n
  const int nvars = m + 1 + 2 * n;
  LinearProgram lp;
  lp.a = Eigen::MatrixXd::Zero(2 * n + 1, nvars);
  lp.b = Eigen::VectorXd::Zero(2 * n + 1);
  lp.c = Eigen::VectorXd::Zero(nvars);
  lp.lower = Eigen::VectorXd::Zero(nvars);
  lp.upper = Eigen::VectorXd::Constant(nvars, kInf);

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      const double v = inv_m * static_cast<double>(a.entries(i, j));
      lp.a(j, i) = v;
      lp.a(n + j, i) = -v;
    }
    lp.a(j, m) = -1.0;
    lp.a(n + j, m) = -1.0;
    lp.a(j, m + 1 + j) = 1.0;
    lp.a(n + j, m + 1 + n + j) = 1.0;
  }
  for (int i = 0; i < m; ++i) lp.a(2 * n, i) = inv_m;
  lp.b[2 * n] = 1.0;

  for (int i = 0; i < m; ++i) lp.upper[i] = cap;
  lp.c[m] = 1.0;
  if (cost_perturbation > 0.0) {
    for (int i = 0; i < m; ++i) lp.c[i] = cost_perturbation * static_cast<double>(i + 1);
  }
  return lp;
}

}  // namespace

WeakLearnRateResult gamma_lp(const MarginMatrix& a, double epsilon) {
  if (a.rows() == 0 || a.cols() == 0) throw InputError("gamma_lp: empty margin matrix");
  if (epsilon < 0.0 || epsilon > 1.0) throw InputError("gamma_lp: epsilon must lie in [0,1]");
  const double m = static_cast<double>(a.rows());
  const double cap = epsilon > 0.0 ? 1.0 / epsilon : m;

  LpSolution sol = solve_lp(gamma_program(a, cap, 0.0));
  long total_iterations = sol.iterations;
  if (sol.status == LpStatus::iteration_limit) {
    // deterministic perturbation retry against degenerate cycling
    sol = solve_lp(gamma_program(a, cap, 1e-10));
    total_iterations += sol.iterations;
  }
  if (sol.status != LpStatus::optimal) {
    throw NumericalError("gamma_lp: simplex failed to reach an optimum");
  }

  WeakLearnRateResult out;
  out.lp_status = sol.status;
  out.iterations = total_iterations;
  out.optimal_density.weights = sol.x.head(a.rows());
  out.optimal_density.epsilon = epsilon > 0.0 ? epsilon : 1.0 / m;
  out.optimal_density.validate();
  // report the objective evaluated at the returned density, not the LP's t
  out.gamma = sup_norm(adjoint_apply(a, out.optimal_density.weights));
  return out;
}

Density inner_dual_density(const Eigen::VectorXd& margin_vec, double epsilon) {
  const Eigen::Index m = margin_vec.size();
  if (m == 0) throw InputError("inner_dual_density: empty margin vector");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw InputError("inner_dual_density: epsilon must lie in (0,1]");
  }

  Density d;
  d.epsilon = epsilon;
  d.weights = Eigen::VectorXd::Zero(m);

  if (epsilon == 1.0) {
    d.weights.setOnes();
    return d;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return margin_vec[i] < margin_vec[j]; });

  // critical atom: the largest value whose strictly-below mass stays <= eps
  const double atom = 1.0 / static_cast<double>(m);
  double below_mass = 0.0;
  double critical = margin_vec[order.front()];
  std::size_t k = 0;
  while (k < order.size()) {
    std::size_t k_end = k;
    while (k_end < order.size() && margin_vec[order[k_end]] == margin_vec[order[k]]) ++k_end;
    if (below_mass <= epsilon) {
      critical = margin_vec[order[k]];
    } else {
      break;
    }
    below_mass += atom * static_cast<double>(k_end - k);
    k = k_end;
  }

  double strictly_below = 0.0;
  Eigen::Index at_critical = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (margin_vec[i] < critical) strictly_below += atom;
    if (margin_vec[i] == critical) ++at_critical;
  }
  const double critical_mass = atom * static_cast<double>(at_critical);
  const double residual = epsilon - strictly_below;  // in [0, critical_mass]
  const double critical_weight =
      critical_mass > 0.0 ? residual / (epsilon * critical_mass) : 0.0;

  for (Eigen::Index i = 0; i < m; ++i) {
    if (margin_vec[i] < critical) {
      d.weights[i] = 1.0 / epsilon;
    } else if (margin_vec[i] == critical) {
      d.weights[i] = critical_weight;
    }
  }
  return d;
}

double density_objective(const Density& d, const Eigen::VectorXd& margin_vec) {
  if (d.weights.size() != margin_vec.size()) {
    throw InputError("density_objective: length mismatch");
  }
  return d.weights.dot(margin_vec) / static_cast<double>(margin_vec.size());
}

double gamma_deviation_bound(double gamma_mu_estimate, double epsilon, long m, double delta) {
  if (!(epsilon > 0.0)) throw InputError("gamma_deviation_bound: epsilon must be positive");
  if (m < 1) throw InputError("gamma_deviation_bound: m must be >= 1");
  if (!(delta > 0.0)) throw InputError("gamma_deviation_bound: delta must be positive");
  const double log_term = std::log(2.0 / delta);
  const double penalty =
      (1.0 / epsilon) * std::sqrt(std::max(log_term, 0.0) / (2.0 * static_cast<double>(m)));
  return gamma_mu_estimate - penalty;
}

}  // namespace cdboost
