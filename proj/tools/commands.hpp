#ifndef CDBOOST_TOOLS_COMMANDS_HPP
#define CDBOOST_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cdboost::cli {

struct SynthArgs {
  std::string kind = "nightmare2";
  long m = 0;
  std::uint64_t seed = 0;
  int dims = 1;
  int intervals = 4;
  double flip = 0.1;
  double width = 0.2;
  bool header = false;
  std::string out;
};
int run_synth(const SynthArgs& args);

struct TrainArgs {
  std::string data;
  bool header = false;
  std::string loss = "logistic";
  std::string step = "exact";
  double a = 2.0 / 3.0;
  double rho = 1.0;
  long iters = 0;  // 0: ceil(m^a)
  bool early_exit = false;
  double grad_tol = 1e-12;
  std::uint64_t seed = 0;
  std::string out;
};
int run_train(const TrainArgs& args);

struct GammaArgs {
  std::string data;
  bool header = false;
  std::string eps = "0.5";
  std::string out;
};
int run_gamma(const GammaArgs& args);

struct DiagnoseArgs {
  std::string run;
  std::string data;  // optional override of the path recorded in the run
  std::string ref_run;
  double ref_scale = 2.0;
  double delta = 0.05;
  std::string out;
};
int run_diagnose(const DiagnoseArgs& args);

struct BoundsArgs {
  std::string mode = "separable";
  std::string params;
  std::string out;
};
int run_bounds(const BoundsArgs& args);

struct ExperimentArgs {
  std::string kind = "nightmare2";
  std::string grid;  // comma-separated m values
  std::uint64_t seed = 0;
  int dims = 1;
  int intervals = 4;
  double flip = 0.1;
  double width = 0.2;
  std::string loss = "logistic";
  std::string step = "exact";
  double a = 2.0 / 3.0;
  double rho = 1.0;
  long test_size = 10000;
  int jobs = 1;
  bool timings = false;
  std::string out;
};
int run_experiment(const ExperimentArgs& args);

std::vector<double> parse_double_list(const std::string& csv);
std::vector<long> parse_long_list(const std::string& csv);

}  // namespace cdboost::cli

#endif
