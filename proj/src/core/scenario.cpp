#include "ilqt/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ilqt/error.hpp"
#include "ilqt/models.hpp"
#include "ilqt/oracle.hpp"

namespace ilqt {

namespace {

using nlohmann::json;

Error ConfigError(const std::string& where, const std::string& what) {
  return Error(ErrorCode::kConfig,
               "config error at " + (where.empty() ? "/" : where) + ": " + what);
}

void RejectUnknown(const json& obj, const std::string& where,
                   const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + "/" + key, "unknown field");
  }
}

double Number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where, "must be finite");
  return d;
}

int Integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where, "expected an integer");
  return v.get<int>();
}

std::string String(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where, "expected a string");
  return v.get<std::string>();
}

std::vector<double> Numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(Number(v[i], where + "/" + std::to_string(i)));
  }
  return out;
}

Vector ToVector(const std::vector<double>& values) {
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

std::vector<double> ToStd(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void RequireSize(std::size_t got, int expected, const std::string& where) {
  if (got != static_cast<std::size_t>(expected)) {
    throw ConfigError(where, "expected " + std::to_string(expected) +
                                 " entries, got " + std::to_string(got));
  }
}

const char* UpdateModeName(UpdateMode mode) {
  return mode == UpdateMode::kPaperLinear ? "paper_linear"
                                          : "nonlinear_rollout";
}

const char* StopModeName(StopMode mode) {
  return mode == StopMode::kCostDelta ? "cost_delta" : "fixed_count";
}

const char* RegModeName(RegularizationMode mode) {
  return mode == RegularizationMode::kAlways ? "always" : "on_ill_condition";
}

// Shortest representation that reads back to the same double.
std::string FormatDouble(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string FormatTime(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", t);
  return buf;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
      cell.pop_back();
    }
    out.push_back(cell);
  }
  return out;
}

struct DesiredTable {
  std::vector<Vector> x_ref;
  std::vector<Vector> u_ref;
};

DesiredTable ReadDesiredTable(const std::filesystem::path& path, int nx,
                              int nu, int steps) {
  std::istringstream in(ReadFile(path));
  const std::string where = "/desired/table";
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(where, "empty table");
  const auto header = SplitCsv(line);
  RequireSize(header.size(), nx + nu, where + " header");
  for (int i = 0; i < nx + nu; ++i) {
    const std::string expected =
        i < nx ? "x" + std::to_string(i) : "u" + std::to_string(i - nx);
    if (header[i] != expected) {
      throw ConfigError(where, "header column " + std::to_string(i) +
                                   " must be '" + expected + "'");
    }
  }
  DesiredTable table;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = SplitCsv(line);
    const std::string at = where + " row " + std::to_string(row);
    RequireSize(cells.size(), nx + nu, at);
    Vector x(nx), u(nu);
    for (int i = 0; i < nx + nu; ++i) {
      double value = 0.0;
      const auto& c = cells[i];
      const auto res = std::from_chars(c.data(), c.data() + c.size(), value);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size() ||
          !std::isfinite(value)) {
        throw ConfigError(at, "bad number '" + c + "'");
      }
      (i < nx ? x[i] : u[i - nx]) = value;
    }
    table.x_ref.push_back(std::move(x));
    table.u_ref.push_back(std::move(u));
    ++row;
  }
  if (row != steps) {
    throw ConfigError(where, "expected " + std::to_string(steps) +
                                 " rows, got " + std::to_string(row));
  }
  return table;
}

}  // namespace

ScenarioConfig ParseConfig(const std::string& json_text,
                           const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  RejectUnknown(root,"",
                {"system", "dt", "duration", "steps", "iterations",
                 "update_mode", "stop_mode", "cost_tolerance", "weights",
                 "desired", "x0", "regularization", "outputs"});

  ScenarioConfig cfg;
  cfg.base_dir = base_dir;

  if (!root.contains("system")) throw ConfigError("/system", "missing");
  cfg.system = String(root["system"], "/system");
  const auto& names = ScenarioNames();
  if (std::find(names.begin(), names.end(), cfg.system) == names.end()) {
    throw ConfigError("/system", "unknown system '" + cfg.system + "'");
  }
  const ContinuousDynamics model = ModelFor(cfg.system);
  const ScenarioDefaults defaults = DefaultScenario(cfg.system);

  if (root.contains("dt")) cfg.dt = Number(root["dt"], "/dt");
  if (!(cfg.dt > 0.0)) throw ConfigError("/dt", "must be > 0");

  if (root.contains("duration") && root.contains("steps")) {
    throw ConfigError("/steps", "give either duration or steps, not both");
  }
  if (root.contains("steps")) {
    cfg.steps = Integer(root["steps"], "/steps");
    if (*cfg.steps < 1) throw ConfigError("/steps", "must be >= 1");
  } else {
    cfg.duration = root.contains("duration")
                       ? Number(root["duration"], "/duration")
                       : defaults.duration;
    if (!(*cfg.duration > 0.0)) throw ConfigError("/duration", "must be > 0");
    if (std::lround(*cfg.duration / cfg.dt) < 1) {
      throw ConfigError("/duration", "shorter than one time step");
    }
  }

  if (root.contains("iterations")) {
    cfg.iterations = Integer(root["iterations"], "/iterations");
    if (cfg.iterations < 1) throw ConfigError("/iterations", "must be >= 1");
  }
  if (root.contains("update_mode")) {
    const auto mode = String(root["update_mode"], "/update_mode");
    if (mode == "paper_linear") {
      cfg.update_mode = UpdateMode::kPaperLinear;
    } else if (mode == "nonlinear_rollout") {
      cfg.update_mode = UpdateMode::kNonlinearRollout;
    } else {
      throw ConfigError("/update_mode", "expected paper_linear or nonlinear_rollout");
    }
  }
  if (root.contains("stop_mode")) {
    const auto mode = String(root["stop_mode"], "/stop_mode");
    if (mode == "fixed_count") {
      cfg.stop_mode = StopMode::kFixedCount;
    } else if (mode == "cost_delta") {
      cfg.stop_mode = StopMode::kCostDelta;
    } else {
      throw ConfigError("/stop_mode", "expected fixed_count or cost_delta");
    }
  }
  if (root.contains("cost_tolerance")) {
    cfg.cost_tolerance = Number(root["cost_tolerance"], "/cost_tolerance");
    if (cfg.cost_tolerance < 0.0) throw ConfigError("/cost_tolerance", "must be >= 0");
  }

  if (!root.contains("weights")) throw ConfigError("/weights", "missing");
  const auto& w = root["weights"];
  RejectUnknown(w, "/weights", {"q_diag", "r_diag"});
  if (!w.contains("q_diag")) throw ConfigError("/weights/q_diag", "missing");
  if (!w.contains("r_diag")) throw ConfigError("/weights/r_diag", "missing");
  cfg.weights.q_diag = Numbers(w["q_diag"], "/weights/q_diag");
  cfg.weights.r_diag = Numbers(w["r_diag"], "/weights/r_diag");
  RequireSize(cfg.weights.q_diag.size(), model.nx, "/weights/q_diag");
  RequireSize(cfg.weights.r_diag.size(), model.nu, "/weights/r_diag");
  for (std::size_t i = 0; i < cfg.weights.q_diag.size(); ++i) {
    if (cfg.weights.q_diag[i] < 0.0) {
      throw ConfigError("/weights/q_diag/" + std::to_string(i), "must be >= 0");
    }
  }
  for (std::size_t i = 0; i < cfg.weights.r_diag.size(); ++i) {
    if (cfg.weights.r_diag[i] < 0.0) {
      throw ConfigError("/weights/r_diag/" + std::to_string(i), "must be >= 0");
    }
  }

  if (!root.contains("desired")) throw ConfigError("/desired", "missing");
  const auto& d = root["desired"];
  RejectUnknown(d, "/desired", {"x", "u", "table"});
  if (d.contains("table")) {
    if (d.contains("x") || d.contains("u")) {
      throw ConfigError("/desired", "give either table or x/u, not both");
    }
    cfg.desired_table = String(d["table"], "/desired/table");
  } else {
    if (!d.contains("x")) throw ConfigError("/desired/x", "missing");
    if (!d.contains("u")) throw ConfigError("/desired/u", "missing");
    const auto x = Numbers(d["x"], "/desired/x");
    const auto u = Numbers(d["u"], "/desired/u");
    RequireSize(x.size(), model.nx, "/desired/x");
    RequireSize(u.size(), model.nu, "/desired/u");
    cfg.x_ref = ToVector(x);
    cfg.u_ref = ToVector(u);
  }

  if (!root.contains("x0")) throw ConfigError("/x0", "missing");
  const auto x0 = Numbers(root["x0"], "/x0");
  RequireSize(x0.size(), model.nx, "/x0");
  cfg.x0 = ToVector(x0);

  if (root.contains("regularization")) {
    const auto& r = root["regularization"];
    RejectUnknown(r, "/regularization", {"lambda", "mode", "condition_threshold"});
    if (r.contains("lambda")) {
      cfg.reg.lambda = Number(r["lambda"], "/regularization/lambda");
      if (cfg.reg.lambda < 0.0) throw ConfigError("/regularization/lambda", "must be >= 0");
    }
    if (r.contains("mode")) {
      const auto mode = String(r["mode"], "/regularization/mode");
      if (mode == "always") {
        cfg.reg.mode = RegularizationMode::kAlways;
      } else if (mode == "on_ill_condition") {
        cfg.reg.mode = RegularizationMode::kOnIllCondition;
      } else {
        throw ConfigError("/regularization/mode", "expected always or on_ill_condition");
      }
    }
    if (r.contains("condition_threshold")) {
      cfg.reg.condition_threshold =
          Number(r["condition_threshold"], "/regularization/condition_threshold");
      if (!(cfg.reg.condition_threshold > 0.0)) {
        throw ConfigError("/regularization/condition_threshold", "must be > 0");
      }
    }
  }

  if (root.contains("outputs")) {
    const auto& o = root["outputs"];
    RejectUnknown(o, "/outputs", {"directory", "formats"});
    if (o.contains("directory")) {
      cfg.output_dir = String(o["directory"], "/outputs/directory");
    }
    if (o.contains("formats")) {
      const auto& f = o["formats"];
      if (!f.is_array()) throw ConfigError("/outputs/formats", "expected an array");
      cfg.formats.clear();
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string where = "/outputs/formats/" + std::to_string(i);
        auto name = String(f[i], where);
        if (name != "trajectory" && name != "gains" && name != "costs") {
          throw ConfigError(where, "expected trajectory, gains or costs");
        }
        cfg.formats.push_back(std::move(name));
      }
    }
  }
  return cfg;
}

ScenarioConfig LoadConfig(const std::filesystem::path& path) {
  return ParseConfig(ReadFile(path), path.parent_path());
}

std::string ConfigToJson(const ScenarioConfig& cfg) {
  json root = json::object();
  root["system"] = cfg.system;
  root["dt"] = cfg.dt;
  if (cfg.steps) {
    root["steps"] = *cfg.steps;
  } else if (cfg.duration) {
    root["duration"] = *cfg.duration;
  }
  root["iterations"] = cfg.iterations;
  root["update_mode"] = UpdateModeName(cfg.update_mode);
  root["stop_mode"] = StopModeName(cfg.stop_mode);
  root["cost_tolerance"] = cfg.cost_tolerance;
  root["weights"] = {{"q_diag", cfg.weights.q_diag},
                     {"r_diag", cfg.weights.r_diag}};
  if (!cfg.desired_table.empty()) {
    root["desired"] = {{"table", cfg.desired_table}};
  } else {
    root["desired"] = {{"x", ToStd(cfg.x_ref)}, {"u", ToStd(cfg.u_ref)}};
  }
  root["x0"] = ToStd(cfg.x0);
  root["regularization"] = {{"lambda", cfg.reg.lambda},
                            {"mode", RegModeName(cfg.reg.mode)},
                            {"condition_threshold", cfg.reg.condition_threshold}};
  root["outputs"] = {{"directory", cfg.output_dir}, {"formats", cfg.formats}};
  return root.dump(2) + "\n";
}

ScenarioConfig DefaultConfig(const std::string& name) {
  const ScenarioDefaults s = DefaultScenario(name);
  ScenarioConfig cfg;
  cfg.system = s.name;
  cfg.dt = s.dt;
  cfg.duration = s.duration;
  cfg.iterations = s.iteration_presets.back();
  cfg.weights = s.weights;
  cfg.x_ref = s.x_ref;
  cfg.u_ref = s.u_ref;
  cfg.x0 = s.x0;
  cfg.output_dir = "out/" + s.name;
  return cfg;
}

int StepCount(const ScenarioConfig& cfg) {
  if (cfg.steps) return *cfg.steps;
  // Nearest integer; halves round away from zero.
  return static_cast<int>(std::lround(cfg.duration.value_or(0.0) / cfg.dt));
}

TrackingProblem BuildProblem(const ScenarioConfig& cfg) {
  const ContinuousDynamics model = ModelFor(cfg.system);
  const int N = StepCount(cfg);
  if (!cfg.desired_table.empty()) {
    std::filesystem::path path = cfg.desired_table;
    if (path.is_relative()) path = cfg.base_dir / path;
    auto table = ReadDesiredTable(path, model.nx, model.nu, N);
    TrackingProblem p = TrackingProblem::Constant(
        cfg.weights, Vector::Zero(model.nx), Vector::Zero(model.nu), cfg.x0, N,
        cfg.dt);
    p.x_ref = std::move(table.x_ref);
    p.u_ref = std::move(table.u_ref);
    return p;
  }
  return TrackingProblem::Constant(cfg.weights, cfg.x_ref, cfg.u_ref, cfg.x0,
                                   N, cfg.dt);
}

std::string TrajectoryCsv(const Trajectory& traj, double dt) {
  const auto nx = traj.x.empty() ? 0 : traj.x[0].size();
  const auto nu = traj.u.empty() ? 0 : traj.u[0].size();
  std::string out = "t";
  for (Eigen::Index i = 0; i < nx; ++i) out += ",x" + std::to_string(i);
  for (Eigen::Index i = 0; i < nu; ++i) out += ",u" + std::to_string(i);
  out += "\n";
  for (std::size_t k = 0; k < traj.x.size(); ++k) {
    out += FormatTime(static_cast<double>(k) * dt);
    for (Eigen::Index i = 0; i < nx; ++i) {
      const double v = traj.x[k][i];
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kDiverged,
                    "non-finite state at step " + std::to_string(k));
      }
      out += "," + FormatDouble(v);
    }
    for (Eigen::Index i = 0; i < nu; ++i) {
      out += ",";
      if (k < traj.u.size()) {
        if (!std::isfinite(traj.u[k][i])) {
          throw Error(ErrorCode::kDiverged,
                      "non-finite control at step " + std::to_string(k));
        }
        out += FormatDouble(traj.u[k][i]);
      }
    }
    out += "\n";
  }
  return out;
}

std::string GainsJson(const SteadyGain& gain, int iteration) {
  json F = json::array();
  for (Eigen::Index r = 0; r < gain.F.rows(); ++r) {
    std::vector<double> row(gain.F.cols());
    for (Eigen::Index c = 0; c < gain.F.cols(); ++c) row[c] = gain.F(r, c);
    F.push_back(row);
  }
  json root = {{"c", ToStd(gain.c)},
               {"F", F},
               {"converged", gain.converged},
               {"step", gain.step},
               {"iteration", iteration}};
  return root.dump(2) + "\n";
}

std::string CostsCsv(const std::vector<double>& costs) {
  std::string out = "iter,cost\n";
  for (std::size_t i = 0; i < costs.size(); ++i) {
    out += std::to_string(i + 1) + "," + FormatDouble(costs[i]) + "\n";
  }
  return out;
}

RunReport RunScenario(const ScenarioConfig& cfg,
                      const std::filesystem::path& out_dir) {
  const TrackingProblem problem = BuildProblem(cfg);
  if (const auto violations = Validate(problem); !violations.empty()) {
    throw Error(ErrorCode::kConfig, "invalid problem: " + Describe(violations));
  }
  const DiscreteDynamics dyn = DiscretizeEuler(ModelFor(cfg.system), cfg.dt);

  IlqrOptions opts;
  opts.max_iterations = cfg.iterations;
  opts.stop_mode = cfg.stop_mode;
  opts.cost_tolerance = cfg.cost_tolerance;
  opts.update_mode = cfg.update_mode;
  opts.reg = cfg.reg;
  IlqrSolution sol = SolveIlqr(problem, dyn, opts);

  RunReport report;
  report.costs = sol.costs;
  report.iterations_used = sol.iterations_used;
  report.gain = SteadyGainOf(sol.policies.back());
  report.trajectory = std::move(sol.trajectory);

  // Render everything before touching the filesystem so a failure leaves
  // no partial output behind.
  const auto wants = [&](const char* name) {
    return std::find(cfg.formats.begin(), cfg.formats.end(), name) !=
           cfg.formats.end();
  };
  std::vector<std::pair<std::string, std::string>> files;
  if (wants("trajectory")) {
    files.emplace_back("trajectory.csv", TrajectoryCsv(report.trajectory, cfg.dt));
  }
  if (wants("gains")) {
    files.emplace_back("gains.json", GainsJson(report.gain, report.iterations_used));
  }
  if (wants("costs")) files.emplace_back("costs.csv", CostsCsv(report.costs));

  const std::filesystem::path dir =
      out_dir.empty() ? std::filesystem::path(cfg.output_dir) : out_dir;
  if (!files.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string());
  }
  for (const auto& [name, text] : files) {
    const auto path = dir / name;
    WriteFile(path, text);
    report.files.push_back(path.string());
  }
  return report;
}

VerifySummary VerifyAgainstOracle(std::uint64_t seed, int cases) {
  if (cases < 1) throw Error(ErrorCode::kInvalidArgument, "cases must be >= 1");
  std::mt19937_64 rng(seed);
  VerifySummary summary;
  summary.cases = cases;
  for (int i = 0; i < cases; ++i) {
    const RandomCase rc = RandomSmallCase(rng);
    const Policy policy = BackwardPass(rc.model, rc.problem);
    const Trajectory dp = ForwardPass(policy, rc.model, rc.problem.x0);
    const BatchSolution batch = SolveBatch(rc.model, rc.problem);

    double u_scale = 0.0;
    double u_dev = 0.0;
    for (int k = 0; k < rc.problem.steps; ++k) {
      const Vector ub = batch.u_stacked.segment(k * rc.problem.nu, rc.problem.nu);
      u_scale = std::max(u_scale, ub.cwiseAbs().maxCoeff());
      u_dev = std::max(u_dev, (dp.u[k] - ub).cwiseAbs().maxCoeff());
    }
    const double dp_cost = TrackingCost(dp, rc.problem);
    const double cost_dev =
        std::abs(dp_cost - batch.cost) / std::max(std::abs(batch.cost), 1e-300);
    summary.max_control_deviation =
        std::max(summary.max_control_deviation, u_dev / (1.0 + u_scale));
    summary.max_cost_deviation = std::max(summary.max_cost_deviation, cost_dev);
  }
  summary.passed = summary.max_control_deviation <= kVerifyControlTolerance &&
                   summary.max_cost_deviation <= kVerifyCostTolerance;
  return summary;
}

std::string FormatSummary(std::uint64_t seed, const VerifySummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "verify seed=%llu cases=%d max_control_deviation=%.3e "
                "max_cost_deviation=%.3e result=%s",
                static_cast<unsigned long long>(seed), s.cases,
                s.max_control_deviation, s.max_cost_deviation,
                s.passed ? "PASS" : "FAIL");
  return buf;
}

}  // namespace ilqt
