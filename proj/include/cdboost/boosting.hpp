#ifndef CDBOOST_BOOSTING_HPP
#define CDBOOST_BOOSTING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdboost/coefficients.hpp"
#include "cdboost/hypothesis.hpp"
#include "cdboost/linesearch.hpp"
#include "cdboost/losses.hpp"

namespace cdboost {

struct BoostConfig {
  double a = 2.0 / 3.0;   // stopping exponent: ceil(m^a) rounds
  double rho = 1.0;       // coordinate-selection slack; 1 = exact argmax
  LossSpec loss = LossSpec::logistic();
  LineSearchConfig step;
  double grad_stop_tolerance = 1e-12;
  bool early_exit = false;  // tolerance-based stop is an extension, off by default
  std::uint64_t seed = 0;   // echoed into reports; the optimizer itself is RNG-free
  // Overrides ceil(m^a); used by polish/diagnostic runs.
  std::optional<long> total_iterations;

  void validate() const;
};

/// Per-iteration snapshot.  Record 0 is the zero vector; its step fields are
/// unset.  grad_sup is the gradient sup-norm measured at this iterate.
struct TrajectoryRecord {
  long t = 0;
  double convex_risk = 0.0;
  double class_risk = 0.0;
  double l1_norm = 0.0;
  double grad_sup = 0.0;
  int index = -1;
  int sign = 0;
  double alpha = 0.0;
  bool unbounded = false;
  bool fallback = false;
  bool saturated = false;
};

struct RunResult {
  CoefficientVector lambda_hat;  // iterate with the best classification error
  long best_t = 0;
  std::vector<TrajectoryRecord> trajectory;
  bool early_exit = false;
  std::string exit_reason;  // "completed" | "stationary" | "grad_tolerance"
};

struct SelectResult {
  int index = -1;
  int sign = 0;
  double score = 0.0;  // (A^T grad)_index
  double sup = 0.0;    // ||A^T grad||_inf
  bool stationary = false;
};

/// Picks the column maximizing |sum_i grad_weights_i A[i][j]|: the exact
/// argmax when rho == 1, otherwise the first index in dictionary order whose
/// score reaches rho * max.  Ties break to the smallest index.  stationary is
/// set when every score is zero.
SelectResult select_coordinate(const MarginMatrix& a, const Eigen::VectorXd& grad_weights,
                               double rho);

/// Fraction of examples classified wrong, with the asymmetric tie rule:
/// margin (A lambda)_i = 0 is an error exactly when the label is -1.
double classification_risk(const Eigen::VectorXd& margin_vec, const Eigen::VectorXd& labels);

long planned_iterations(Eigen::Index m, const BoostConfig& cfg);

/// Coordinate-descent boosting: ceil(m^a) rounds of approximate best-column
/// selection and one of the three step rules, returning the iterate with the
/// smallest empirical classification risk (earliest on ties; iterate 0 is
/// excluded).  Deterministic for fixed inputs.
RunResult run(const Dataset& data, const HypothesisDictionary& dict, const MarginMatrix& a,
              const BoostConfig& cfg);
RunResult run(const Dataset& data, const BoostConfig& cfg);

}  // namespace cdboost

#endif
