#ifndef CDBOOST_COEFFICIENTS_HPP
#define CDBOOST_COEFFICIENTS_HPP

#include <cmath>
#include <map>

namespace cdboost {

/// Sparse weighting over dictionary indices with a tracked l1 norm.
/// Exact zeros are never stored.
class CoefficientVector {
 public:
  void add(int index, double delta) {
    if (delta == 0.0) return;
    auto [it, inserted] = weights_.try_emplace(index, 0.0);
    l1_ -= std::abs(it->second);
    it->second += delta;
    if (it->second == 0.0) {
      weights_.erase(it);
    } else {
      l1_ += std::abs(it->second);
    }
  }

  double operator[](int index) const {
    auto it = weights_.find(index);
    return it == weights_.end() ? 0.0 : it->second;
  }

  double l1_norm() const { return l1_; }
  bool empty() const { return weights_.empty(); }
  std::size_t support_size() const { return weights_.size(); }

  const std::map<int, double>& entries() const { return weights_; }

  CoefficientVector scaled(double factor) const {
    CoefficientVector out;
    for (const auto& [idx, w] : weights_) out.add(idx, factor * w);
    return out;
  }

 private:
  std::map<int, double> weights_;
  double l1_ = 0.0;
};

}  // namespace cdboost

#endif
