#include "cdboost/linesearch.hpp"

#include <cmath>
#include <string>

#include "cdboost/errors.hpp"

namespace cdboost {

StepRule step_rule_from_name(std::string_view name) {
  if (name == "exact") return StepRule::exact;
  if (name == "qb" || name == "quadratic_bound") return StepRule::quadratic_bound;
  if (name == "wolfe") return StepRule::wolfe;
  throw InputError("unknown step rule '" + std::string(name) + "' (expected exact|qb|wolfe)");
}

const char* step_rule_name(StepRule rule) {
  switch (rule) {
    case StepRule::exact: return "exact";
    case StepRule::quadratic_bound: return "qb";
    case StepRule::wolfe: return "wolfe";
  }
  return "?";
}

double empirical_risk(const Eigen::VectorXd& margin_vec, const LossSpec& spec) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < margin_vec.size(); ++i) sum += loss_value(spec, margin_vec[i]);
  return sum / static_cast<double>(margin_vec.size());
}

namespace {

// Ray through the current margins along a signed dictionary column.
struct Ray {
  const Eigen::VectorXd& u;
  Eigen::VectorXd dir;  // sign * A.col(j), in {-1,+1}
  const LossSpec& spec;
  double inv_m;

  Ray(const MarginMatrix& a, const Eigen::VectorXd& margin_vec, int column, int sign,
      const LossSpec& s)
      : u(margin_vec), dir(sign * signed_column(a, column)), spec(s),
        inv_m(1.0 / static_cast<double>(margin_vec.size())) {}

  double value(double alpha) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      sum += loss_value(spec, u[i] + alpha * dir[i]);
    }
    return sum * inv_m;
  }

  double slope(double alpha) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      sum += loss_deriv(spec, u[i] + alpha * dir[i]) * dir[i];
    }
    return sum * inv_m;
  }

  bool has_positive_entry() const { return (dir.array() > 0.0).any(); }
};

void require_descent(double slope0) {
  if (!(slope0 < 0.0)) {
    throw InputError("line search requires a descent direction (phi'(0) < 0)");
  }
}

StepRecord make_record(const Ray& ray, int column, int sign, double alpha, double slope0) {
  StepRecord rec;
  rec.alpha = alpha;
  rec.direction_sign = sign;
  rec.hypothesis_index = column;
  rec.grad_inner = slope0;
  rec.phi0 = ray.value(0.0);
  rec.phi_alpha = ray.value(alpha);
  return rec;
}

double quadratic_bound_alpha(double slope0, const LossSpec& spec) {
  return -slope0 / spec.b2;
}

}  // namespace

double directional_derivative(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                              int column, int sign, double alpha, const LossSpec& spec) {
  Ray ray(a, margin_vec, column, sign, spec);
  return ray.slope(alpha);
}

StepRecord search_quadratic_bound(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                                  int column, int sign, const LossSpec& spec,
                                  const LineSearchConfig& cfg) {
  (void)cfg;
  require_lipschitz_smooth(spec, "quadratic_bound step");
  Ray ray(a, margin_vec, column, sign, spec);
  const double slope0 = ray.slope(0.0);
  require_descent(slope0);
  return make_record(ray, column, sign, quadratic_bound_alpha(slope0, spec), slope0);
}

StepRecord search_exact(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                        int column, int sign, const LossSpec& spec,
                        const LineSearchConfig& cfg) {
  Ray ray(a, margin_vec, column, sign, spec);
  const double slope0 = ray.slope(0.0);
  require_descent(slope0);

  if (!ray.has_positive_entry()) {
    // phi' never changes sign: the whole sample agrees with the direction.
    require_lipschitz_smooth(spec, "exact step fallback on unbounded direction");
    StepRecord rec = make_record(ray, column, sign, quadratic_bound_alpha(slope0, spec), slope0);
    rec.unbounded_flag = true;
    return rec;
  }

  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (ray.slope(hi) < 0.0) {
    lo = hi;
    hi *= cfg.bracket_growth;
    if (++doublings > cfg.max_bracket_doublings) {
      throw NumericalError("exact line search failed to bracket a stationary point");
    }
  }

  double alpha = hi;
  while (hi - lo > cfg.root_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s = ray.slope(mid);
    alpha = mid;
    if (std::abs(s) <= cfg.root_tolerance) break;
    if (s < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return make_record(ray, column, sign, alpha, slope0);
}

StepRecord search_wolfe(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                        int column, int sign, const LossSpec& spec,
                        const LineSearchConfig& cfg) {
  Ray ray(a, margin_vec, column, sign, spec);
  const double slope0 = ray.slope(0.0);
  require_descent(slope0);
  const double phi0 = ray.value(0.0);

  auto armijo = [&](double alpha, double phi) {
    return phi <= phi0 + alpha * cfg.wolfe_c1 * slope0;
  };
  auto curvature = [&](double alpha) { return ray.slope(alpha) >= cfg.wolfe_c2 * slope0; };

  // Doubling phase: grow while sufficient decrease holds but curvature fails.
  double lo = 0.0;
  double alpha = 1.0;
  double hi = -1.0;  // unset
  for (int doublings = 0;; ++doublings) {
    const double phi = ray.value(alpha);
    if (!armijo(alpha, phi)) {
      hi = alpha;
      break;
    }
    if (curvature(alpha)) {
      return make_record(ray, column, sign, alpha, slope0);
    }
    lo = alpha;
    alpha *= cfg.bracket_growth;
    if (doublings >= cfg.max_bracket_doublings) {
      throw NumericalError("Wolfe search failed to bracket within the doubling cap");
    }
  }

  // Bisection: sufficient decrease holds at lo, fails at hi.  Ties resolve
  // toward smaller alpha via the lower half being tried first.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double phi = ray.value(mid);
    if (!armijo(mid, phi)) {
      hi = mid;
    } else if (curvature(mid)) {
      return make_record(ray, column, sign, mid, slope0);
    } else {
      lo = mid;
    }
  }
  if (lo > 0.0 && curvature(lo)) {
    return make_record(ray, column, sign, lo, slope0);
  }
  throw NumericalError("Wolfe bisection failed to locate an admissible step");
}

StepRecord take_step(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                     int column, int sign, const LossSpec& spec,
                     const LineSearchConfig& cfg) {
  switch (cfg.option) {
    case StepRule::exact:
      return search_exact(a, margin_vec, column, sign, spec, cfg);
    case StepRule::quadratic_bound:
      return search_quadratic_bound(a, margin_vec, column, sign, spec, cfg);
    case StepRule::wolfe:
      try {
        return search_wolfe(a, margin_vec, column, sign, spec, cfg);
      } catch (const NumericalError&) {
        StepRecord rec = search_quadratic_bound(a, margin_vec, column, sign, spec, cfg);
        rec.fallback = true;
        return rec;
      }
  }
  throw InputError("unknown step rule");
}

}  // namespace cdboost
