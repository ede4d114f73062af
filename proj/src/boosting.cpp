#include "cdboost/boosting.hpp"

#include <cmath>

#include "cdboost/errors.hpp"

namespace cdboost {

void BoostConfig::validate() const {
  if (!(a > 0.0 && a < 1.0)) throw InputError("stopping exponent a must lie in (0,1)");
  if (!(rho > 0.0 && rho <= 1.0)) throw InputError("selection slack rho must lie in (0,1]");
  if (!(grad_stop_tolerance >= 0.0)) throw InputError("grad_stop_tolerance must be >= 0");
  if (total_iterations && *total_iterations < 1) {
    throw InputError("total_iterations override must be >= 1");
  }
}

SelectResult select_coordinate(const MarginMatrix& a, const Eigen::VectorXd& grad_weights,
                               double rho) {
  if (grad_weights.size() != a.rows()) {
    throw InputError("select_coordinate: weight vector length does not match rows");
  }
  const Eigen::Index n = a.cols();
  Eigen::VectorXd scores(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    scores[j] = a.entries.col(j).cast<double>().dot(grad_weights);
  }

  SelectResult out;
  double best = 0.0;
  Eigen::Index best_j = -1;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(scores[j]);
    if (mag > best) {
      best = mag;
      best_j = j;
    }
  }
  out.sup = best;
  if (best_j < 0 || best == 0.0) {
    out.stationary = true;
    return out;
  }

  Eigen::Index pick = best_j;
  if (rho < 1.0) {
    const double cutoff = rho * best;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(scores[j]) >= cutoff) {
        pick = j;
        break;
      }
    }
  }
  out.index = static_cast<int>(pick);
  out.score = scores[pick];
  out.sign = scores[pick] > 0.0 ? -1 : +1;
  return out;
}

double classification_risk(const Eigen::VectorXd& margin_vec, const Eigen::VectorXd& labels) {
  if (margin_vec.size() != labels.size()) {
    throw InputError("classification_risk: margin/label length mismatch");
  }
  Eigen::Index errors = 0;
  for (Eigen::Index i = 0; i < margin_vec.size(); ++i) {
    // (A lambda)_i = -y_i (H lambda)_i; the risk charges y=+1 when the score
    // is negative and y=-1 when it is >= 0, so zero margin errs iff y == -1.
    const bool err = labels[i] > 0.0 ? margin_vec[i] > 0.0 : margin_vec[i] >= 0.0;
    if (err) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(margin_vec.size());
}

long planned_iterations(Eigen::Index m, const BoostConfig& cfg) {
  if (cfg.total_iterations) return *cfg.total_iterations;
  // tiny guard so pow() landing a hair above an integer does not add a round
  const double raw = std::pow(static_cast<double>(m), cfg.a);
  return static_cast<long>(std::ceil(raw - 1e-9));
}

RunResult run(const Dataset& data, const HypothesisDictionary& dict, const MarginMatrix& a,
              const BoostConfig& cfg) {
  cfg.validate();
  data.validate();
  if (dict.size() != a.cols()) {
    throw InputError("dictionary and margin matrix disagree on column count");
  }
  const Eigen::Index m = a.rows();
  const double inv_m = 1.0 / static_cast<double>(m);
  const long horizon = planned_iterations(m, cfg);
  const bool track_saturation = cfg.loss.kind == LossKind::exponential;

  RunResult result;
  result.exit_reason = "completed";
  result.trajectory.reserve(static_cast<std::size_t>(horizon) + 1);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);  // cached margins A*lambda
  CoefficientVector lambda;

  TrajectoryRecord zero;
  zero.t = 0;
  zero.convex_risk = empirical_risk(u, cfg.loss);
  zero.class_risk = classification_risk(u, data.labels);
  result.trajectory.push_back(zero);

  Eigen::VectorXd grad(m);
  std::vector<std::pair<int, double>> steps;  // (index, signed alpha) per round

  for (long t = 1; t <= horizon; ++t) {
    for (Eigen::Index i = 0; i < m; ++i) grad[i] = loss_deriv(cfg.loss, u[i]) * inv_m;
    SelectResult sel = select_coordinate(a, grad, cfg.rho);
    result.trajectory.back().grad_sup = sel.sup;

    if (sel.stationary) {
      result.early_exit = true;
      result.exit_reason = "stationary";
      break;
    }
    if (cfg.early_exit && sel.sup <= cfg.grad_stop_tolerance) {
      result.early_exit = true;
      result.exit_reason = "grad_tolerance";
      break;
    }

    StepRecord step = take_step(a, u, sel.index, sel.sign, cfg.loss, cfg.step);

    lambda.add(sel.index, sel.sign * step.alpha);
    u += step.alpha * sel.sign * signed_column(a, sel.index);
    steps.emplace_back(sel.index, sel.sign * step.alpha);

    TrajectoryRecord rec;
    rec.t = t;
    rec.convex_risk = empirical_risk(u, cfg.loss);
    rec.class_risk = classification_risk(u, data.labels);
    rec.l1_norm = lambda.l1_norm();
    rec.index = sel.index;
    rec.sign = sel.sign;
    rec.alpha = step.alpha;
    rec.unbounded = step.unbounded_flag;
    rec.fallback = step.fallback;
    rec.saturated = track_saturation && u.cwiseAbs().maxCoeff() > 700.0;
    result.trajectory.push_back(rec);
  }

  // gradient sup-norm at the final iterate; adjoint_apply carries the 1/m
  for (Eigen::Index i = 0; i < m; ++i) grad[i] = loss_deriv(cfg.loss, u[i]);
  result.trajectory.back().grad_sup = sup_norm(adjoint_apply(a, grad));

  // best classification error over t >= 1, earliest on ties
  long best_t = 0;
  double best_risk = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < result.trajectory.size(); ++k) {
    if (result.trajectory[k].class_risk < best_risk) {
      best_risk = result.trajectory[k].class_risk;
      best_t = result.trajectory[k].t;
    }
  }
  result.best_t = best_t;
  for (long k = 0; k < best_t; ++k) {
    result.lambda_hat.add(steps[static_cast<std::size_t>(k)].first,
                          steps[static_cast<std::size_t>(k)].second);
  }
  return result;
}

RunResult run(const Dataset& data, const BoostConfig& cfg) {
  auto [dict, a] = build_dictionary(data);
  return run(data, dict, a, cfg);
}

}  // namespace cdboost
