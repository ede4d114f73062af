#include "cdboost/synthetic.hpp"

#include <cmath>
#include <string>

#include "cdboost/errors.hpp"

namespace cdboost {

GeneratorKind generator_kind_from_name(std::string_view name) {
  if (name == "nightmare1") return GeneratorKind::nightmare1;
  if (name == "nightmare2") return GeneratorKind::nightmare2;
  if (name == "separable_margin") return GeneratorKind::separable_margin;
  if (name == "uniform_noise") return GeneratorKind::uniform_noise;
  throw InputError("unknown generator '" + std::string(name) + "'");
}

const char* generator_kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::nightmare1: return "nightmare1";
    case GeneratorKind::nightmare2: return "nightmare2";
    case GeneratorKind::separable_margin: return "separable_margin";
    case GeneratorKind::uniform_noise: return "uniform_noise";
  }
  return "?";
}

void GeneratorSpec::validate() const {
  if (m < 1) throw InputError("generator: m must be >= 1");
  if (dims < 1) throw InputError("generator: dims must be >= 1");
  if (kind == GeneratorKind::nightmare1 && intervals < 1) {
    throw InputError("nightmare1: intervals must be >= 1");
  }
  if (kind == GeneratorKind::nightmare2 &&
      !(flip_probability >= 0.0 && flip_probability < 0.5)) {
    throw InputError("nightmare2: flip probability must lie in [0, 0.5)");
  }
  if (kind == GeneratorKind::separable_margin &&
      !(margin_width > 0.0 && margin_width < 1.0)) {
    throw InputError("separable_margin: width must lie in (0,1)");
  }
  if (reference.size() != reference_weights.size()) {
    throw InputError("nightmare2: reference stumps and weights differ in length");
  }
}

double combination_value(const std::vector<Stump>& stumps, const std::vector<double>& weights,
                         const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  double v = 0.0;
  for (std::size_t k = 0; k < stumps.size(); ++k) {
    v += weights[k] * static_cast<double>(stumps[k].predict(x));
  }
  return v;
}

std::pair<std::vector<Stump>, std::vector<double>> nightmare1_perfect_combination(int intervals) {
  // interval i carries label (-1)^(i+1); stumps at the interior boundaries
  // 1/(j+1) with alternating unit weights telescope to +-1 across intervals,
  // and the constant offset pins the first interval to +1
  std::vector<Stump> stumps;
  std::vector<double> weights;
  double at_first = 0.0;
  for (int j = 1; j < intervals; ++j) {
    stumps.push_back(Stump{0, 1.0 / (static_cast<double>(j) + 1.0), +1});
    const double w = (j % 2 == 1) ? 1.0 : -1.0;
    weights.push_back(w);
    at_first += w;  // every interior boundary lies below interval 1
  }
  // constant stump (threshold below the domain) sets the level
  stumps.push_back(Stump{0, 0.0, +1});
  weights.push_back(1.0 - at_first);
  return {std::move(stumps), std::move(weights)};
}

GeneratedData generate(const GeneratorSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);

  GeneratedData out;
  out.data.features.resize(spec.m, spec.dims);
  out.data.labels.resize(spec.m);

  switch (spec.kind) {
    case GeneratorKind::nightmare1: {
      const double k = static_cast<double>(spec.intervals);
      const double lo = 1.0 / (k + 1.0);
      for (long i = 0; i < spec.m; ++i) {
        const double x = lo + rng.next_unit() * (1.0 - lo);
        // x in (1/(j+1), 1/j]  <=>  j = floor(1/x)
        const long j = static_cast<long>(std::floor(1.0 / x));
        out.data.features(i, 0) = x;
        for (int f = 1; f < spec.dims; ++f) out.data.features(i, f) = rng.next_unit();
        out.data.labels[i] = (j % 2 == 1) ? 1.0 : -1.0;
      }
      out.bayes_risk = 0.0;
      break;
    }
    case GeneratorKind::nightmare2: {
      std::vector<Stump> reference = spec.reference;
      std::vector<double> weights = spec.reference_weights;
      if (reference.empty()) {
        reference.push_back(Stump{0, 0.5, +1});
        weights.push_back(1.0);
      }
      for (long i = 0; i < spec.m; ++i) {
        for (int f = 0; f < spec.dims; ++f) out.data.features(i, f) = rng.next_unit();
        const double v = combination_value(reference, weights, out.data.features.row(i));
        double y = v >= 0.0 ? 1.0 : -1.0;
        if (rng.next_unit() < spec.flip_probability) y = -y;
        out.data.labels[i] = y;
      }
      out.bayes_risk = spec.flip_probability;
      break;
    }
    case GeneratorKind::separable_margin: {
      const double half = 0.5 * spec.margin_width;
      for (long i = 0; i < spec.m; ++i) {
        // draw uniformly from [0, 0.5-half] u [0.5+half, 1]
        const double u = rng.next_unit() * (1.0 - spec.margin_width);
        const double x0 = u < 0.5 - half ? u : u + spec.margin_width;
        out.data.features(i, 0) = x0;
        for (int f = 1; f < spec.dims; ++f) out.data.features(i, f) = rng.next_unit();
        out.data.labels[i] = x0 >= 0.5 ? 1.0 : -1.0;
      }
      out.bayes_risk = 0.0;
      break;
    }
    case GeneratorKind::uniform_noise: {
      for (long i = 0; i < spec.m; ++i) {
        for (int f = 0; f < spec.dims; ++f) out.data.features(i, f) = rng.next_unit();
        out.data.labels[i] = (rng.next_u64() & 1ull) ? 1.0 : -1.0;
      }
      out.bayes_risk = 0.5;
      break;
    }
  }
  return out;
}

}  // namespace cdboost
