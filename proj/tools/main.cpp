#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "cdboost/errors.hpp"
#include "commands.hpp"

// Exit codes: 0 success, 2 input error, 3 numerical failure.

int main(int argc, char** argv) {
  using namespace cdboost;
  using namespace cdboost::cli;

  CLI::App app{"coordinate-descent boosting over decision stumps"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key/value config file; explicit flags win");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a benchmark sample");
  synth_cmd->add_option("--kind", synth.kind,
                        "nightmare1|nightmare2|separable_margin|uniform_noise");
  synth_cmd->add_option("--m", synth.m, "sample size")->required();
  synth_cmd->add_option("--seed", synth.seed, "stream seed");
  synth_cmd->add_option("--dims", synth.dims, "feature dimensions");
  synth_cmd->add_option("--intervals", synth.intervals, "nightmare1 interval count");
  synth_cmd->add_option("--flip", synth.flip, "nightmare2 label flip probability");
  synth_cmd->add_option("--width", synth.width, "separable_margin band width");
  synth_cmd->add_flag("--header", synth.header, "write a header row");
  synth_cmd->add_option("--out", synth.out, "output CSV path")->required();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "run the boosting optimizer");
  train_cmd->add_option("--data", train.data, "training CSV")->required();
  train_cmd->add_flag("--header", train.header, "input has a header row");
  train_cmd->add_option("--loss", train.loss, "logistic|exponential|russell");
  train_cmd->add_option("--step", train.step, "exact|qb|wolfe");
  train_cmd->add_option("--a", train.a, "stopping exponent in (0,1)");
  train_cmd->add_option("--rho", train.rho, "selection slack in (0,1]");
  train_cmd->add_option("--iters", train.iters, "override ceil(m^a) rounds");
  train_cmd->add_flag("--early-exit", train.early_exit, "stop on vanishing gradient");
  train_cmd->add_option("--grad-tol", train.grad_tol, "early-exit gradient tolerance");
  train_cmd->add_option("--seed", train.seed, "echoed into the run file");
  train_cmd->add_option("--out", train.out, "output run.json path")->required();

  GammaArgs gamma;
  auto* gamma_cmd = app.add_subcommand("gamma", "weak-learning rate via the exact LP");
  gamma_cmd->add_option("--data", gamma.data, "CSV sample")->required();
  gamma_cmd->add_flag("--header", gamma.header, "input has a header row");
  gamma_cmd->add_option("--eps", gamma.eps, "comma-separated density caps");
  gamma_cmd->add_option("--out", gamma.out, "output CSV path")->required();

  DiagnoseArgs diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "dual certificate and bound checks for a run");
  diag_cmd->add_option("--run", diag.run, "run.json from train")->required();
  diag_cmd->add_option("--data", diag.data, "override the dataset path recorded in the run");
  diag_cmd->add_option("--ref-run", diag.ref_run, "reference run for the geometric-rate check");
  diag_cmd->add_option("--ref-scale", diag.ref_scale, "scale applied to the reference weighting");
  diag_cmd->add_option("--delta", diag.delta, "confidence for reported preconditions");
  diag_cmd->add_option("--out", diag.out, "output diag.json path")->required();

  BoundsArgs bnd;
  auto* bounds_cmd = app.add_subcommand("bounds", "finite-sample bound calculators");
  bounds_cmd->add_option("--mode", bnd.mode, "separable|nonseparable");
  bounds_cmd->add_option("--params", bnd.params, "params.json")->required();
  bounds_cmd->add_option("--out", bnd.out, "output bounds.json path")->required();

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "risk-vs-m consistency curves");
  exp_cmd->add_option("--kind", exp.kind, "generator kind");
  exp_cmd->add_option("--grid", exp.grid, "comma-separated sample sizes")->required();
  exp_cmd->add_option("--seed", exp.seed, "base seed; per-point streams derive from it");
  exp_cmd->add_option("--dims", exp.dims, "feature dimensions");
  exp_cmd->add_option("--intervals", exp.intervals, "nightmare1 interval count");
  exp_cmd->add_option("--flip", exp.flip, "nightmare2 flip probability");
  exp_cmd->add_option("--width", exp.width, "separable_margin band width");
  exp_cmd->add_option("--loss", exp.loss, "loss name");
  exp_cmd->add_option("--step", exp.step, "step rule");
  exp_cmd->add_option("--a", exp.a, "stopping exponent");
  exp_cmd->add_option("--rho", exp.rho, "selection slack");
  exp_cmd->add_option("--test-size", exp.test_size, "held-out sample size per grid point");
  exp_cmd->add_option("--jobs", exp.jobs, "parallel grid points");
  exp_cmd->add_flag("--timings", exp.timings, "append a wall_time_s column (non-deterministic)");
  exp_cmd->add_option("--out", exp.out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*train_cmd) return run_train(train);
    if (*gamma_cmd) return run_gamma(gamma);
    if (*diag_cmd) return run_diagnose(diag);
    if (*bounds_cmd) return run_bounds(bnd);
    if (*exp_cmd) return run_experiment(exp);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
