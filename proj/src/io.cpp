#include "cdboost/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cdboost/errors.hpp"

namespace cdboost {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // drop digits as long as the value still round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[64];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(shorter, "%lf", &back);
    if (back == v) return shorter;
  }
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw InputError("write to '" + path + "' failed");
}

Dataset load_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "' for reading");

  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (has_header && line_no == 1) continue;

    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size() && cell.find_first_not_of(" \t", used) != std::string::npos) {
          throw std::invalid_argument(cell);
        }
      } catch (const std::exception&) {
        throw InputError(path + ":" + std::to_string(line_no) + ": bad numeric cell '" + cell + "'");
      }
    }
    if (row.size() < 2) {
      throw InputError(path + ":" + std::to_string(line_no) + ": need at least one feature and a label");
    }
    if (!rows.empty() && rows.front().size() != row.size()) {
      throw InputError(path + ":" + std::to_string(line_no) + ": inconsistent column count");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path + ": no data rows");

  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(rows.front().size()) - 1;
  Dataset data;
  data.features.resize(m, d);
  data.labels.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index f = 0; f < d; ++f) data.features(i, f) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)];
    data.labels[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
  }
  data.validate();
  return data;
}

void save_csv(const Dataset& data, const std::string& path, bool with_header) {
  std::ostringstream out;
  if (with_header) {
    for (Eigen::Index f = 0; f < data.dims(); ++f) out << "x" << f << ",";
    out << "y\n";
  }
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index f = 0; f < data.dims(); ++f) {
      out << format_double(data.features(i, f)) << ",";
    }
    out << (data.labels[i] > 0 ? "1" : "-1") << "\n";
  }
  write_text_file(path, out.str());
}

namespace {

ordered_json record_to_json(const TrajectoryRecord& r) {
  ordered_json j;
  j["t"] = r.t;
  j["convex_risk"] = r.convex_risk;
  j["class_risk"] = r.class_risk;
  j["l1_norm"] = r.l1_norm;
  j["grad_sup"] = r.grad_sup;
  j["index"] = r.index;
  j["sign"] = r.sign;
  j["alpha"] = r.alpha;
  j["unbounded"] = r.unbounded;
  j["fallback"] = r.fallback;
  j["saturated"] = r.saturated;
  return j;
}

TrajectoryRecord record_from_json(const ordered_json& j) {
  TrajectoryRecord r;
  r.t = j.at("t").get<long>();
  r.convex_risk = j.at("convex_risk").get<double>();
  r.class_risk = j.at("class_risk").get<double>();
  r.l1_norm = j.at("l1_norm").get<double>();
  r.grad_sup = j.at("grad_sup").get<double>();
  r.index = j.at("index").get<int>();
  r.sign = j.at("sign").get<int>();
  r.alpha = j.at("alpha").get<double>();
  r.unbounded = j.at("unbounded").get<bool>();
  r.fallback = j.at("fallback").get<bool>();
  r.saturated = j.at("saturated").get<bool>();
  return r;
}

}  // namespace

void save_run_json(const RunArtifact& run, const std::string& path) {
  ordered_json j;
  j["config"] = {{"data", run.data_path},
                 {"data_header", run.data_has_header},
                 {"loss", run.loss_name},
                 {"step", run.step_name},
                 {"a", run.a},
                 {"rho", run.rho},
                 {"seed", run.seed},
                 {"early_exit", run.early_exit_enabled}};
  if (run.total_iterations) j["config"]["iters"] = *run.total_iterations;
  j["best_t"] = run.best_t;
  j["exit_reason"] = run.exit_reason;
  ordered_json traj = ordered_json::array();
  for (const auto& r : run.trajectory) traj.push_back(record_to_json(r));
  j["trajectory"] = std::move(traj);
  ordered_json lam = ordered_json::array();
  for (const auto& [stump, w] : run.lambda_hat) {
    lam.push_back({{"feature", stump.feature},
                   {"threshold", stump.threshold},
                   {"polarity", stump.polarity},
                   {"weight", w}});
  }
  j["lambda_hat"] = std::move(lam);
  write_text_file(path, j.dump(2) + "\n");
}

RunArtifact load_run_json(const std::string& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  try {
    RunArtifact run;
    const auto& cfg = j.at("config");
    run.data_path = cfg.at("data").get<std::string>();
    run.data_has_header = cfg.at("data_header").get<bool>();
    run.loss_name = cfg.at("loss").get<std::string>();
    run.step_name = cfg.at("step").get<std::string>();
    run.a = cfg.at("a").get<double>();
    run.rho = cfg.at("rho").get<double>();
    run.seed = cfg.at("seed").get<std::uint64_t>();
    run.early_exit_enabled = cfg.at("early_exit").get<bool>();
    if (cfg.contains("iters")) run.total_iterations = cfg.at("iters").get<long>();
    run.best_t = j.at("best_t").get<long>();
    run.exit_reason = j.at("exit_reason").get<std::string>();
    for (const auto& r : j.at("trajectory")) run.trajectory.push_back(record_from_json(r));
    for (const auto& e : j.at("lambda_hat")) {
      Stump s{e.at("feature").get<int>(), e.at("threshold").get<double>(),
              e.at("polarity").get<int>()};
      run.lambda_hat.emplace_back(s, e.at("weight").get<double>());
    }
    return run;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": malformed run file: " + e.what());
  }
}

}  // namespace cdboost
