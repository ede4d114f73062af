#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cdboost/boosting.hpp"
#include "cdboost/bounds.hpp"
#include "cdboost/duality.hpp"
#include "cdboost/errors.hpp"
#include "cdboost/io.hpp"
#include "cdboost/synthetic.hpp"
#include "cdboost/weaklearn.hpp"

namespace cdboost::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string sidecar_meta_path(const std::string& out) {
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return out + ".meta.json";
  }
  return out.substr(0, dot) + ".meta.json";
}

GeneratorSpec generator_from_args(const std::string& kind, long m, std::uint64_t seed, int dims,
                                  int intervals, double flip, double width) {
  GeneratorSpec gen;
  gen.kind = generator_kind_from_name(kind);
  gen.m = m;
  gen.seed = seed;
  gen.dims = dims;
  gen.intervals = intervals;
  gen.flip_probability = flip;
  gen.margin_width = width;
  return gen;
}

BoostConfig boost_config_from(const std::string& loss, const std::string& step, double a,
                              double rho, long iters, bool early_exit, double grad_tol,
                              std::uint64_t seed) {
  BoostConfig cfg;
  cfg.loss = LossSpec::from_name(loss);
  cfg.step.option = step_rule_from_name(step);
  cfg.a = a;
  cfg.rho = rho;
  if (iters > 0) cfg.total_iterations = iters;
  cfg.early_exit = early_exit;
  cfg.grad_stop_tolerance = grad_tol;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

CoefficientVector replay_final_lambda(const RunArtifact& run) {
  CoefficientVector lambda;
  for (std::size_t k = 1; k < run.trajectory.size(); ++k) {
    lambda.add(run.trajectory[k].index, run.trajectory[k].sign * run.trajectory[k].alpha);
  }
  return lambda;
}

ordered_json json_real(bounds::Real v) {
  const double d = static_cast<double>(v);
  if (std::isfinite(d)) return d;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.15Lg", v);
  return std::string(buf);
}

double classification_risk_of_combination(const std::vector<std::pair<Stump, double>>& lambda,
                                          const Dataset& data) {
  Eigen::Index errors = 0;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    double score = 0.0;
    for (const auto& [stump, w] : lambda) {
      score += w * static_cast<double>(stump.predict(data.features.row(i)));
    }
    const bool err = data.labels[i] > 0.0 ? score < 0.0 : score >= 0.0;
    if (err) ++errors;
  }
  return static_cast<double>(errors) / static_cast<double>(data.size());
}

}  // namespace

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw InputError("bad numeric list entry '" + cell + "'");
    }
  }
  return out;
}

std::vector<long> parse_long_list(const std::string& csv) {
  std::vector<long> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    try {
      out.push_back(std::stol(cell));
    } catch (const std::exception&) {
      throw InputError("bad integer list entry '" + cell + "'");
    }
  }
  return out;
}

int run_synth(const SynthArgs& args) {
  if (args.out.empty()) throw InputError("synth: --out is required");
  auto gen = generator_from_args(args.kind, args.m, args.seed, args.dims, args.intervals,
                                 args.flip, args.width);
  auto [data, bayes] = generate(gen);
  save_csv(data, args.out, args.header);

  ordered_json meta;
  meta["kind"] = args.kind;
  meta["m"] = args.m;
  meta["seed"] = args.seed;
  meta["dims"] = args.dims;
  if (gen.kind == GeneratorKind::nightmare1) meta["intervals"] = args.intervals;
  if (gen.kind == GeneratorKind::nightmare2) meta["flip_probability"] = args.flip;
  if (gen.kind == GeneratorKind::separable_margin) meta["margin_width"] = args.width;
  meta["header"] = args.header;
  if (bayes) meta["bayes_risk"] = *bayes;
  write_text_file(sidecar_meta_path(args.out), meta.dump(2) + "\n");
  return 0;
}

int run_train(const TrainArgs& args) {
  if (args.data.empty()) throw InputError("train: --data is required");
  if (args.out.empty()) throw InputError("train: --out is required");
  Dataset data = load_csv(args.data, args.header);
  BoostConfig cfg = boost_config_from(args.loss, args.step, args.a, args.rho, args.iters,
                                      args.early_exit, args.grad_tol, args.seed);
  auto [dict, a] = build_dictionary(data);
  RunResult result = run(data, dict, a, cfg);

  RunArtifact artifact;
  artifact.data_path = args.data;
  artifact.data_has_header = args.header;
  artifact.loss_name = args.loss;
  artifact.step_name = args.step;
  artifact.a = args.a;
  artifact.rho = args.rho;
  artifact.seed = args.seed;
  artifact.early_exit_enabled = args.early_exit;
  if (cfg.total_iterations) artifact.total_iterations = *cfg.total_iterations;
  artifact.best_t = result.best_t;
  artifact.exit_reason = result.exit_reason;
  artifact.trajectory = result.trajectory;
  for (const auto& [idx, w] : result.lambda_hat.entries()) {
    artifact.lambda_hat.emplace_back(dict.stumps[static_cast<std::size_t>(idx)], w);
  }
  save_run_json(artifact, args.out);
  return 0;
}

int run_gamma(const GammaArgs& args) {
  if (args.data.empty()) throw InputError("gamma: --data is required");
  if (args.out.empty()) throw InputError("gamma: --out is required");
  Dataset data = load_csv(args.data, args.header);
  auto [dict, a] = build_dictionary(data);

  const std::vector<double> eps_values = parse_double_list(args.eps);
  if (eps_values.empty()) throw InputError("gamma: --eps list is empty");

  std::ostringstream csv;
  csv << "epsilon,gamma,lp_iterations\n";
  for (double eps : eps_values) {
    auto res = gamma_lp(a, eps);
    csv << format_double(eps) << "," << format_double(res.gamma) << "," << res.iterations << "\n";
  }
  write_text_file(args.out, csv.str());
  return 0;
}

int run_diagnose(const DiagnoseArgs& args) {
  if (args.run.empty()) throw InputError("diagnose: --run is required");
  if (args.out.empty()) throw InputError("diagnose: --out is required");
  RunArtifact artifact = load_run_json(args.run);
  const std::string data_path = args.data.empty() ? artifact.data_path : args.data;
  Dataset data = load_csv(data_path, artifact.data_has_header);
  auto [dict, a] = build_dictionary(data);
  const LossSpec spec = LossSpec::from_name(artifact.loss_name);

  CoefficientVector lambda = replay_final_lambda(artifact);
  const Eigen::VectorXd final_margins = margins(a, lambda);
  const double replayed_risk = empirical_risk(final_margins, spec);
  if (!artifact.trajectory.empty() &&
      std::abs(replayed_risk - artifact.trajectory.back().convex_risk) > 1e-6) {
    throw InputError("diagnose: replayed trajectory disagrees with the run file; "
                     "was it trained on this dataset?");
  }

  ordered_json out;
  out["run"] = args.run;
  out["data"] = data_path;
  out["loss"] = artifact.loss_name;
  out["rho"] = artifact.rho;

  auto cert = dual_certificate(a, final_margins, spec);
  out["certificate"] = {{"primal_value", cert.primal_value},
                        {"dual_value", cert.dual_value},
                        {"gap", cert.gap},
                        {"feasibility_violation", cert.feasibility_violation}};

  // pointwise conjugate-pair equality holds identically at gradient images
  double max_fy_residual = 0.0;
  for (Eigen::Index i = 0; i < final_margins.size(); ++i) {
    const double lhs = cert.weights[i] * final_margins[i];
    const double rhs = loss_value(spec, final_margins[i]) + conjugate(spec, cert.weights[i]);
    max_fy_residual = std::max(max_fy_residual, std::abs(lhs - rhs));
  }
  out["certificate"]["max_fenchel_young_residual"] = max_fy_residual;

  const CurvatureBundle* bundle_ptr = nullptr;
  CurvatureBundle bundle;
  try {
    bundle = curvature_bundle(cert, spec, artifact.rho);
    bundle_ptr = &bundle;
    out["bundle"] = {{"tau", bundle.tau},
                     {"c", bundle.c},
                     {"b1", bundle.b1},
                     {"r1", json_real(static_cast<bounds::Real>(bundle.r1))},
                     {"p_inf_norm", bundle.p_inf_norm}};
    const double precondition_m = 2.0 / (bundle.tau * bundle.tau) * std::log(4.0 / args.delta);
    out["bundle"]["sample_size_precondition"] = precondition_m;
    out["bundle"]["sample_size_satisfied"] = static_cast<double>(data.size()) >= precondition_m;
    if (static_cast<double>(data.size()) < precondition_m) {
      out["bundle"]["warning"] = "sample below the theorem's threshold; diagnostics are advisory";
    }
  } catch (const std::exception& e) {
    out["bundle"] = nullptr;
    out["bundle_skip_reason"] = e.what();
  }

  auto report = check_step_bounds(a, artifact.trajectory, bundle_ptr, spec, artifact.rho);
  out["step_bounds"] = {{"all_norm_chain_ok", report.all_norm_chain_ok},
                        {"all_alpha_bounds_ok", report.all_alpha_bounds_ok}};
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["t"] = row.t;
    r["alpha"] = row.alpha;
    r["l1_norm"] = row.l1_norm;
    r["sqrt_scaled_rms"] = row.sqrt_scaled_rms;
    if (bundle_ptr) {
      r["radius"] = json_real(static_cast<bounds::Real>(row.radius));
      r["window_certified"] = row.window_certified;
    }
    r["b1_hat"] = row.b1_hat;
    r["alpha_sq"] = row.alpha_sq;
    r["alpha_sq_bound"] = row.alpha_sq_bound;
    r["norm_chain_ok"] = row.norm_chain_ok;
    r["alpha_bound_ok"] = row.alpha_bound_ok;
    rows.push_back(std::move(r));
  }
  out["step_bounds"]["rows"] = std::move(rows);

  if (!args.ref_run.empty()) {
    RunArtifact ref = load_run_json(args.ref_run);
    CoefficientVector reference = replay_final_lambda(ref).scaled(args.ref_scale);
    try {
      auto rate = geometric_rate_check(a, artifact.trajectory, reference, spec, artifact.rho);
      out["geometric_rate"] = {{"c3", rate.c3},
                               {"exponent", rate.exponent},
                               {"lhs", rate.lhs},
                               {"rhs", rate.rhs},
                               {"reference_risk", rate.reference_risk},
                               {"alpha_sum", rate.alpha_sum},
                               {"holds", rate.holds}};
    } catch (const InputError& e) {
      out["geometric_rate"] = nullptr;
      out["geometric_rate_skip_reason"] = e.what();
    }
  }

  write_text_file(args.out, out.dump(2) + "\n");
  return 0;
}

int run_bounds(const BoundsArgs& args) {
  if (args.params.empty()) throw InputError("bounds: --params is required");
  if (args.out.empty()) throw InputError("bounds: --out is required");
  ordered_json params;
  try {
    params = ordered_json::parse(read_text_file(args.params));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(args.params + ": " + e.what());
  }

  auto real_at = [&](const char* key, bounds::Real fallback,
                     bool required = false) -> bounds::Real {
    if (!params.contains(key)) {
      if (required) throw InputError(std::string("bounds params: missing '") + key + "'");
      return fallback;
    }
    return static_cast<bounds::Real>(params.at(key).get<double>());
  };

  bounds::BoundInputs base;
  base.m = params.contains("m") ? params.at("m").get<long>()
                                : throw InputError("bounds params: missing 'm'");
  base.a = real_at("a", 0.5L, true);
  base.delta = real_at("delta", 0.05L, true);
  base.vc = real_at("vc", 2.0L, true);
  base.rho = real_at("rho", 1.0L);
  base.loss = LossSpec::from_name(params.value("loss", "logistic"));

  ordered_json out;
  out["mode"] = args.mode;
  out["params"] = params;

  if (args.mode == "separable") {
    base.epsilon = real_at("epsilon", 0.1L, true);
    base.gamma = real_at("gamma", 0.0L, true);
    out["sample_threshold"] = json_real(bounds::separable_sample_threshold(base));
    out["risk_bound"] = json_real(bounds::separable_risk_bound(base));
    out["gamma_is_estimate"] = true;
  } else if (args.mode == "nonseparable") {
    bounds::NonseparableInputs in;
    in.base = base;
    in.b1 = real_at("b1", 0.0L, true);
    in.r1 = real_at("r1", 0.0L, true);
    in.r_t_minus_1 = real_at("r_t_minus_1", 0.0L, true);
    in.r_t = real_at("r_t", 0.0L, true);
    in.lambda_bar_norm = real_at("lambda_bar_norm", 0.0L, true);
    in.inf_term = real_at("inf_term", 0.0L);
    in.empirical_class_risk = real_at("empirical_class_risk", 0.0L);
    auto terms = bounds::nonseparable_risk_bound(in);
    ordered_json breakdown;
    for (const auto& [name, value] : terms.breakdown()) breakdown[name] = json_real(value);
    out["terms"] = std::move(breakdown);
    out["inf_term_is_estimate"] = true;
    if (params.contains("excess_convex_risk")) {
      out["psi_calibrated_excess"] = json_real(
          bounds::psi_inverse(real_at("excess_convex_risk", 0.0L), base.loss));
    }
  } else {
    throw InputError("bounds: --mode must be separable or nonseparable");
  }

  write_text_file(args.out, out.dump(2) + "\n");
  return 0;
}

int run_experiment(const ExperimentArgs& args) {
  if (args.out.empty()) throw InputError("experiment: --out is required");
  const std::vector<long> grid = parse_long_list(args.grid);
  const long test_size = args.test_size;
  if (test_size < 1) throw InputError("experiment: --test-size must be >= 1");

  struct Row {
    long m = 0;
    double train_risk = 0.0;
    double test_risk = 0.0;
    double bayes = 0.0;
    double l1 = 0.0;
    long iterations = 0;
    double wall_s = 0.0;
  };

  auto run_point = [&](long m) -> Row {
    const auto t0 = std::chrono::steady_clock::now();
    auto train_gen = generator_from_args(args.kind, m, derive_stream_seed(args.seed, m, 0), args.dims,
                                         args.intervals, args.flip, args.width);
    auto [train_data, bayes] = generate(train_gen);
    BoostConfig cfg = boost_config_from(args.loss, args.step, args.a, args.rho, 0, false, 1e-12,
                                        args.seed);
    auto [dict, a] = build_dictionary(train_data);
    RunResult result = run(train_data, dict, a, cfg);

    std::vector<std::pair<Stump, double>> lambda;
    for (const auto& [idx, w] : result.lambda_hat.entries()) {
      lambda.emplace_back(dict.stumps[static_cast<std::size_t>(idx)], w);
    }

    auto test_gen = generator_from_args(args.kind, test_size, derive_stream_seed(args.seed, m, 1),
                                        args.dims, args.intervals, args.flip, args.width);
    auto [test_data, test_bayes] = generate(test_gen);

    Row row;
    row.m = m;
    row.train_risk = classification_risk(margins(a, result.lambda_hat), train_data.labels);
    row.test_risk = classification_risk_of_combination(lambda, test_data);
    row.bayes = bayes.value_or(std::numeric_limits<double>::quiet_NaN());
    row.l1 = result.lambda_hat.l1_norm();
    row.iterations = result.trajectory.back().t;
    row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
  };

  std::vector<Row> rows(grid.size());
  const int jobs = std::max(1, args.jobs);
  if (jobs == 1) {
    for (std::size_t k = 0; k < grid.size(); ++k) rows[k] = run_point(grid[k]);
  } else {
    // each point is independent and seeded by (seed, m), so scheduling
    // cannot change results
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&]() {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= grid.size()) return;
          rows[k] = run_point(grid[k]);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  std::ostringstream csv;
  csv << "m,train_risk,test_risk,bayes_risk,l1_norm,iterations";
  if (args.timings) csv << ",wall_time_s";
  csv << "\n";
  for (const auto& row : rows) {
    csv << row.m << "," << format_double(row.train_risk) << "," << format_double(row.test_risk)
        << "," << format_double(row.bayes) << "," << format_double(row.l1) << ","
        << row.iterations;
    if (args.timings) csv << "," << format_double(row.wall_s);
    csv << "\n";
  }
  write_text_file(args.out, csv.str());
  return 0;
}

}  // namespace cdboost::cli
