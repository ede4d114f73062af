#include "cdboost/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdboost/errors.hpp"
#include "cdboost/linesearch.hpp"

namespace cdboost {

DualCertificate dual_certificate(const MarginMatrix& a, const Eigen::VectorXd& margin_vec,
                                 const LossSpec& spec) {
  require_lipschitz_smooth(spec, "dual_certificate");
  if (margin_vec.size() != a.rows()) {
    throw InputError("dual_certificate: margin vector length does not match rows");
  }
  const Eigen::Index m = margin_vec.size();

  DualCertificate cert;
  cert.weights.resize(m);
  double conj_sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    cert.weights[i] = loss_deriv(spec, margin_vec[i]);
    conj_sum += conjugate(spec, cert.weights[i]);
  }
  cert.dual_value = -conj_sum / static_cast<double>(m);
  cert.feasibility_violation = sup_norm(adjoint_apply(a, cert.weights));
  cert.primal_value = empirical_risk(margin_vec, spec);
  cert.gap = cert.primal_value - cert.dual_value;
  return cert;
}

double min_second_deriv_on_window(const LossSpec& spec, double c) {
  if (spec.kind == LossKind::logistic) {
    // loss'' is even and unimodal with its peak at 0, so the window minimum
    // sits at the edge
    return loss_second_deriv(spec, c);
  }
  require_twice_differentiable(spec, "min_second_deriv_on_window");
  const int steps = 4000;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= steps; ++k) {
    const double z = -c + 2.0 * c * static_cast<double>(k) / static_cast<double>(steps);
    best = std::min(best, loss_second_deriv(spec, z));
  }
  return best;
}

CurvatureBundle curvature_bundle(const DualCertificate& cert, const LossSpec& spec, double rho) {
  require_lipschitz_smooth(spec, "curvature_bundle");
  require_twice_differentiable(spec, "curvature_bundle");
  if (!(rho > 0.0 && rho <= 1.0)) throw InputError("curvature_bundle: rho must lie in (0,1]");
  if (!(cert.dual_value > 0.0)) {
    throw InputError("curvature_bundle: certificate is separable (dual value <= 0)");
  }

  CurvatureBundle out;
  out.tau = conjugate_inverse(spec, -cert.dual_value) / 2.0;
  if (!(out.tau > 0.0)) {
    throw InputError("curvature_bundle: tau vanished; instance looks separable");
  }
  out.p_inf_norm = cert.weights.size() > 0 ? cert.weights.maxCoeff() : 0.0;
  out.c = (16.0 * spec.value_at_zero) / (out.tau * spec.deriv_at_zero) *
          std::max(1.0, 1.0 / out.tau) * std::max(1.0, out.p_inf_norm);
  out.b1 = (out.tau / 8.0) * min_second_deriv_on_window(spec, out.c);
  if (!(out.b1 > 0.0)) {
    throw NumericalError("curvature_bundle: curvature floor underflowed to zero");
  }
  // R_1^2 = loss(0) * max{5, 2*B2/B1} / (rho^2 * B1) can overflow a double
  // even when R_1 itself is representable
  const double factor = std::max(5.0, 2.0 * spec.b2 / out.b1);
  const double log_r1_sq = std::log(spec.value_at_zero) + std::log(factor) -
                           2.0 * std::log(rho) - std::log(out.b1);
  out.r1 = std::exp(0.5 * log_r1_sq);
  return out;
}

namespace {

// Margins of every iterate, replayed from the per-step records.
std::vector<Eigen::VectorXd> replay_margins(const MarginMatrix& a,
                                            const std::vector<TrajectoryRecord>& trajectory) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(trajectory.size());
  Eigen::VectorXd u = Eigen::VectorXd::Zero(a.rows());
  out.push_back(u);
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const TrajectoryRecord& rec = trajectory[k];
    u += rec.alpha * static_cast<double>(rec.sign) * signed_column(a, rec.index);
    out.push_back(u);
  }
  return out;
}

}  // namespace

StepBoundReport check_step_bounds(const MarginMatrix& a,
                                  const std::vector<TrajectoryRecord>& trajectory,
                                  const CurvatureBundle* bundle, const LossSpec& spec,
                                  double rho) {
  StepBoundReport report;
  if (trajectory.size() <= 1) return report;  // vacuous

  const auto margin_history = replay_margins(a, trajectory);
  const Eigen::Index m = a.rows();
  const double inv_m = 1.0 / static_cast<double>(m);

  double alpha_sq_sum = 0.0;
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const TrajectoryRecord& rec = trajectory[k];
    const Eigen::VectorXd& before = margin_history[k - 1];
    const Eigen::VectorXd& after = margin_history[k];

    StepBoundRow row;
    row.t = rec.t;
    row.alpha = rec.alpha;
    row.alpha_sq = rec.alpha * rec.alpha;
    alpha_sq_sum += row.alpha_sq;
    row.l1_norm = rec.l1_norm;
    row.sqrt_scaled_rms = std::sqrt(static_cast<double>(rec.t)) * std::sqrt(alpha_sq_sum);
    row.norm_chain_ok = row.l1_norm <= row.sqrt_scaled_rms * (1.0 + 1e-12) + 1e-12;

    double floor_sum = 0.0;
    Eigen::Index small_before = 0;
    Eigen::Index small_after = 0;
    const double window = bundle ? bundle->c : 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      floor_sum += std::min(loss_second_deriv(spec, before[i]), loss_second_deriv(spec, after[i]));
      if (bundle) {
        if (std::abs(before[i]) <= window) ++small_before;
        if (std::abs(after[i]) <= window) ++small_after;
      }
    }
    row.b1_hat = floor_sum * inv_m;

    const double grad_before = trajectory[k - 1].grad_sup;
    const double drop = trajectory[k - 1].convex_risk - rec.convex_risk;
    if (row.b1_hat > 0.0) {
      const double bound1 =
          9.0 * grad_before * grad_before / (4.0 * rho * rho * row.b1_hat * row.b1_hat);
      const double bound2 = std::max(5.0, 2.0 * spec.b2 / row.b1_hat) * std::max(drop, 0.0) /
                            (rho * rho * row.b1_hat);
      row.alpha_sq_bound = std::min(bound1, bound2);
      row.alpha_bound_ok = row.alpha_sq <= row.alpha_sq_bound * (1.0 + 1e-9) + 1e-12;
    } else {
      row.alpha_sq_bound = std::numeric_limits<double>::infinity();
      row.alpha_bound_ok = true;  // zero measured curvature puts no ceiling on the step
    }

    if (bundle) {
      row.radius = bundle->radius(rec.t);
      row.norm_chain_ok = row.norm_chain_ok && row.sqrt_scaled_rms <= row.radius * (1.0 + 1e-12);
      const double small_frac =
          static_cast<double>(std::min(small_before, small_after)) * inv_m;
      row.window_certified = small_frac >= bundle->tau / 8.0;
    } else {
      row.radius = std::numeric_limits<double>::quiet_NaN();
    }

    report.all_norm_chain_ok = report.all_norm_chain_ok && row.norm_chain_ok;
    report.all_alpha_bounds_ok = report.all_alpha_bounds_ok && row.alpha_bound_ok;
    report.rows.push_back(row);
  }
  return report;
}

GeometricRateReport geometric_rate_check(const MarginMatrix& a,
                                         const std::vector<TrajectoryRecord>& trajectory,
                                         const CoefficientVector& reference,
                                         const LossSpec& spec, double rho) {
  require_lipschitz_smooth(spec, "geometric_rate_check");
  if (trajectory.empty()) throw InputError("geometric_rate_check: empty trajectory");
  if (!(rho > 0.0 && rho <= 1.0)) throw InputError("geometric_rate_check: rho must lie in (0,1]");

  GeometricRateReport rep;
  rep.reference_risk = empirical_risk(margins(a, reference), spec);
  const double final_risk = trajectory.back().convex_risk;
  if (!(rep.reference_risk < final_risk)) {
    throw InputError("geometric_rate_check: reference weighting is not strictly better");
  }

  rep.c3 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const double alpha = trajectory[k].alpha;
    if (alpha > 0.0) {
      rep.c3 = std::min(rep.c3, trajectory[k - 1].grad_sup / alpha);
    }
    rep.alpha_sum += alpha;
  }
  if (!std::isfinite(rep.c3) || rep.c3 <= 0.0) {
    throw NumericalError("geometric_rate_check: no positive step/gradient ratio found");
  }

  // the envelope exponent from the decay factor exp(-c3 rho^2 alpha / (6 B2 dist))
  rep.exponent = rep.c3 * rho * rho / (6.0 * spec.b2);
  rep.lhs = final_risk - rep.reference_risk;
  const double ref_norm = reference.l1_norm();
  const double initial_excess = trajectory.front().convex_risk - rep.reference_risk;
  const double ratio = ref_norm / (ref_norm + rep.alpha_sum);
  rep.rhs = initial_excess * std::pow(ratio, rep.exponent);
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-12;
  return rep;
}

}  // namespace cdboost
