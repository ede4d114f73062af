#ifndef CDBOOST_IO_HPP
#define CDBOOST_IO_HPP

#include <optional>
#include <string>

#include "cdboost/boosting.hpp"
#include "cdboost/hypothesis.hpp"

namespace cdboost {

/// CSV layout: d feature columns then one label column in {-1,+1}; an
/// optional single header row is skipped when has_header is set.
Dataset load_csv(const std::string& path, bool has_header = false);
void save_csv(const Dataset& data, const std::string& path, bool with_header = false);

// Shortest round-trip decimal rendering ("%.17g" trimmed), used everywhere a
// double lands in a text artifact so outputs stay byte-deterministic.
std::string format_double(double v);

struct RunArtifact {
  // config echo
  std::string data_path;
  bool data_has_header = false;
  std::string loss_name;
  std::string step_name;
  double a = 0.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  bool early_exit_enabled = false;
  std::optional<long> total_iterations;

  // outcome
  long best_t = 0;
  std::string exit_reason;
  std::vector<TrajectoryRecord> trajectory;
  // returned weighting, resolved to stumps
  std::vector<std::pair<Stump, double>> lambda_hat;
};

void save_run_json(const RunArtifact& run, const std::string& path);
RunArtifact load_run_json(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace cdboost

#endif
