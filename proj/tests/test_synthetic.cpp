#include <doctest.h>

#include <cmath>

#include "cdboost/boosting.hpp"
#include "cdboost/errors.hpp"
#include "cdboost/synthetic.hpp"
#include "cdboost/weaklearn.hpp"

using namespace cdboost;

TEST_CASE("generation is reproducible bit for bit") {
  for (auto kind : {GeneratorKind::nightmare1, GeneratorKind::nightmare2,
                    GeneratorKind::separable_margin, GeneratorKind::uniform_noise}) {
    GeneratorSpec gen;
    gen.kind = kind;
    gen.m = 64;
    gen.seed = 1234;
    gen.dims = 2;
    auto a = generate(gen);
    auto b = generate(gen);
    CHECK((a.data.features.array() == b.data.features.array()).all());
    CHECK((a.data.labels.array() == b.data.labels.array()).all());
    auto c = generate(GeneratorSpec{kind, 64, 1235, 2});
    CHECK(!(a.data.features.array() == c.data.features.array()).all());
  }
}

TEST_CASE("nightmare1 support, labels and perfect combination") {
  GeneratorSpec gen;
  gen.kind = GeneratorKind::nightmare1;
  gen.intervals = 2;
  gen.m = 1000;
  gen.seed = 42;
  auto [data, bayes] = generate(gen);
  REQUIRE(bayes.has_value());
  CHECK(*bayes == 0.0);

  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double x = data.features(i, 0);
    CHECK(x > 1.0 / 3.0);
    CHECK(x <= 1.0);
    const long interval = static_cast<long>(std::floor(1.0 / x));
    CHECK(data.labels[i] == ((interval % 2 == 1) ? 1.0 : -1.0));
  }

  for (int k : {1, 2, 4, 7}) {
    gen.intervals = k;
    gen.m = 500;
    auto [sample, unused] = generate(gen);
    auto [stumps, weights] = nightmare1_perfect_combination(k);
    int errors = 0;
    for (Eigen::Index i = 0; i < sample.size(); ++i) {
      const double f = combination_value(stumps, weights, sample.features.row(i));
      if (f * sample.labels[i] <= 0.0) ++errors;
    }
    CHECK(errors == 0);
  }
}

TEST_CASE("nightmare2 flip fraction is near its rate") {
  GeneratorSpec gen;
  gen.kind = GeneratorKind::nightmare2;
  gen.m = 10000;
  gen.seed = 7;
  auto [data, bayes] = generate(gen);
  REQUIRE(bayes.has_value());
  CHECK(*bayes == doctest::Approx(0.1));

  // count labels that disagree with the default reference stump at 0.5
  long flips = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double clean = data.features(i, 0) >= 0.5 ? 1.0 : -1.0;
    if (clean != data.labels[i]) ++flips;
  }
  const double fraction = static_cast<double>(flips) / static_cast<double>(data.size());
  CHECK(fraction >= 0.09);
  CHECK(fraction <= 0.11);
}

TEST_CASE("separable_margin keeps the band empty and one stump perfect") {
  GeneratorSpec gen;
  gen.kind = GeneratorKind::separable_margin;
  gen.m = 300;
  gen.seed = 50;
  gen.margin_width = 0.3;
  auto [data, bayes] = generate(gen);
  CHECK(*bayes == 0.0);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const double x = data.features(i, 0);
    CHECK(std::abs(x - 0.5) >= 0.15 - 1e-12);
    CHECK(data.labels[i] == (x >= 0.5 ? 1.0 : -1.0));
  }
}

TEST_CASE("uniform noise washes out the weak learning rate as m grows") {
  double prev = 1.0;
  for (long m : {16L, 64L, 256L}) {
    GeneratorSpec gen;
    gen.kind = GeneratorKind::uniform_noise;
    gen.m = m;
    gen.seed = 19;
    auto [data, bayes] = generate(gen);
    auto [dict, a] = build_dictionary(data);
    const double g = gamma_lp(a, 0.5).gamma;
    CHECK(g <= prev + 0.02);
    prev = g;
  }
  CHECK(prev < 0.2);
}

TEST_CASE("generator validation") {
  GeneratorSpec gen;
  gen.m = 0;
  CHECK_THROWS_AS(generate(gen), InputError);
  gen.m = 10;
  gen.kind = GeneratorKind::nightmare2;
  gen.flip_probability = 0.6;
  CHECK_THROWS_AS(generate(gen), InputError);
  CHECK(generator_kind_from_name("nightmare1") == GeneratorKind::nightmare1);
  CHECK_THROWS_AS(generator_kind_from_name("bogus"), InputError);
}
