#ifndef CDBOOST_SYNTHETIC_HPP
#define CDBOOST_SYNTHETIC_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdboost/hypothesis.hpp"

namespace cdboost {

/// Counter-based SplitMix64 stream: value k of stream (seed) is
/// mix(seed + (k+1) * 0x9E3779B97F4A7C15).  Stateless indexing makes every
/// dataset bit-identical across platforms and thread schedules.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform double in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Independent derived stream for grid point (seed, m, tag); tag 0 is the
/// training draw and tag 1 the held-out draw.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, long m, std::uint64_t tag) {
  SplitMix64 rng(seed ^ (static_cast<std::uint64_t>(m) * 0x9E3779B97F4A7C15ull) ^ (tag << 32));
  return rng.next_u64();
}

enum class GeneratorKind { nightmare1, nightmare2, separable_margin, uniform_noise };

GeneratorKind generator_kind_from_name(std::string_view name);
const char* generator_kind_name(GeneratorKind kind);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::nightmare2;
  long m = 0;
  std::uint64_t seed = 0;
  int dims = 1;                      // nightmare2 / separable_margin / uniform_noise
  int intervals = 4;                 // nightmare1: number of alternating intervals
  double flip_probability = 0.1;     // nightmare2
  std::vector<Stump> reference;      // nightmare2 target combination; default one stump at 0.5
  std::vector<double> reference_weights;
  double margin_width = 0.2;         // separable_margin

  void validate() const;
};

struct GeneratedData {
  Dataset data;
  std::optional<double> bayes_risk;  // known for every built-in construction
};

/// Deterministic samples for the adversarial constructions:
///  - nightmare1: x uniform on (1/(k+1), 1], label alternates by interval
///    parity (Bayes risk 0);
///  - nightmare2: x uniform on [0,1]^d, label = sign of the reference
///    combination flipped independently with the given probability
///    (Bayes risk = flip probability);
///  - separable_margin: one perfect stump with a margin band of the given
///    width around its threshold (Bayes risk 0);
///  - uniform_noise: labels are fair coins (Bayes risk 1/2).
GeneratedData generate(const GeneratorSpec& spec);

/// The alternating threshold combination that classifies nightmare1 with k
/// intervals perfectly; weights alternate so the value telescopes across the
/// interval boundaries.
std::pair<std::vector<Stump>, std::vector<double>> nightmare1_perfect_combination(int intervals);

/// Applies a stump combination to one point.
double combination_value(const std::vector<Stump>& stumps, const std::vector<double>& weights,
                         const Eigen::Ref<const Eigen::RowVectorXd>& x);

}  // namespace cdboost

#endif
