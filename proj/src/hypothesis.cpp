#include "cdboost/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "cdboost/errors.hpp"

namespace cdboost {

void Dataset::validate() const {
  if (features.rows() == 0 || features.cols() == 0) {
    throw InputError("dataset must have at least one row and one feature");
  }
  if (labels.size() != features.rows()) {
    throw InputError("label count does not match row count");
  }
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw InputError("labels must be exactly -1 or +1");
    }
  }
  if (!features.allFinite()) {
    throw InputError("features contain NaN or infinite values");
  }
}

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<std::int8_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int8_t b : v) {
      h ^= static_cast<std::size_t>(static_cast<std::uint8_t>(b));
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

std::pair<HypothesisDictionary, MarginMatrix> build_dictionary(const Dataset& data) {
  data.validate();
  const Eigen::Index m = data.size();
  const Eigen::Index d = data.dims();

  HypothesisDictionary dict;
  dict.vc_dimension = static_cast<int>(d) + 1;

  std::vector<std::vector<std::int8_t>> columns;
  std::unordered_map<std::vector<std::int8_t>, std::size_t, VectorHash> seen;

  std::vector<double> values(static_cast<std::size_t>(m));
  for (Eigen::Index f = 0; f < d; ++f) {
    for (Eigen::Index i = 0; i < m; ++i) values[static_cast<std::size_t>(i)] = data.features(i, f);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<double> thresholds;
    thresholds.reserve(values.size());
    thresholds.push_back(values.front() - 1.0);  // constant-prediction stump
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      thresholds.push_back(0.5 * (values[k] + values[k + 1]));
    }

    for (double theta : thresholds) {
      for (int polarity : {-1, +1}) {
        Stump s{static_cast<int>(f), theta, polarity};
        std::vector<std::int8_t> col(static_cast<std::size_t>(m));
        for (Eigen::Index i = 0; i < m; ++i) {
          const int pred = data.features(i, f) - theta >= 0.0 ? polarity : -polarity;
          col[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(pred);
        }
        if (seen.emplace(col, columns.size()).second) {
          dict.stumps.push_back(s);
          columns.push_back(std::move(col));
        }
      }
    }
  }

  MarginMatrix a;
  a.entries.resize(m, static_cast<Eigen::Index>(columns.size()));
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const auto& col = columns[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < m; ++i) {
      const double y = data.labels[i];
      a.entries(i, j) = static_cast<std::int8_t>(-static_cast<int>(y) * col[static_cast<std::size_t>(i)]);
    }
  }
  return {std::move(dict), std::move(a)};
}

Eigen::VectorXd margins(const MarginMatrix& a, const CoefficientVector& lambda) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.rows());
  for (const auto& [j, w] : lambda.entries()) {
    if (j < 0 || j >= a.cols()) {
      throw InputError("coefficient index out of dictionary range");
    }
    out += w * a.entries.col(j).cast<double>();
  }
  return out;
}

Eigen::VectorXd signed_column(const MarginMatrix& a, int j) {
  if (j < 0 || j >= a.cols()) {
    throw InputError("column index out of range");
  }
  return a.entries.col(j).cast<double>();
}

Eigen::VectorXd adjoint_apply(const MarginMatrix& a, const Eigen::VectorXd& p) {
  if (p.size() != a.rows()) {
    throw InputError("adjoint_apply: weight vector length does not match rows");
  }
  const double inv_m = 1.0 / static_cast<double>(a.rows());
  Eigen::VectorXd out(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    out[j] = inv_m * a.entries.col(j).cast<double>().dot(p);
  }
  return out;
}

}  // namespace cdboost
