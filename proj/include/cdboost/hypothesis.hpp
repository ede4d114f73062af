#ifndef CDBOOST_HYPOTHESIS_HPP
#define CDBOOST_HYPOTHESIS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "cdboost/coefficients.hpp"

namespace cdboost {

/// Labeled sample: one row per example, labels strictly in {-1,+1}.
struct Dataset {
  Eigen::MatrixXd features;  // m x d
  Eigen::VectorXd labels;    // m

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dims() const { return features.cols(); }

  // Throws InputError on empty data, label values outside {-1,+1}, or
  // non-finite features.
  void validate() const;
};

/// Axis-aligned binary decision stump: polarity * sign(x[feature] - threshold)
/// with sign(0) := +1.
struct Stump {
  int feature = 0;
  double threshold = 0.0;
  int polarity = 1;

  int predict(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
    return x[feature] - threshold >= 0.0 ? polarity : -polarity;
  }
};

struct HypothesisDictionary {
  std::vector<Stump> stumps;
  int vc_dimension = 0;  // d+1 by default; bound calculators only read the number

  Eigen::Index size() const { return static_cast<Eigen::Index>(stumps.size()); }
};

using SignMatrix = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense m x n matrix with entries[i][j] = -y_i * h_j(x_i) in {-1,+1}.
/// One signed byte per entry; all heavy sums accumulate in double.
struct MarginMatrix {
  SignMatrix entries;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

/// Enumerates stumps over the sample: per feature, thresholds at midpoints of
/// consecutive distinct sorted values plus one below the minimum, both
/// polarities, deduplicated on identical prediction vectors (first in
/// (feature, threshold, polarity) order wins).  Deterministic.
std::pair<HypothesisDictionary, MarginMatrix> build_dictionary(const Dataset& data);

/// (A lambda)_i = sum_j A[i][j] * lambda_j.
Eigen::VectorXd margins(const MarginMatrix& a, const CoefficientVector& lambda);

/// Column j of A scaled into doubles.
Eigen::VectorXd signed_column(const MarginMatrix& a, int j);

/// (A^T p / m)_j = (1/m) sum_i p_i A[i][j]; the 1/m realizes integration
/// against the empirical measure.  Throws InputError on length mismatch.
Eigen::VectorXd adjoint_apply(const MarginMatrix& a, const Eigen::VectorXd& p);

inline double sup_norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace cdboost

#endif
