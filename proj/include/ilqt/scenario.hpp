#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ilqt/ilqr.hpp"
#include "ilqt/lqr.hpp"
#include "ilqt/problem.hpp"

namespace ilqt {

/// Declarative description of one benchmark run, read from JSON.
///
/// Unknown keys are rejected. `desired` is either constant vectors
/// ({"x": [...], "u": [...]}) or a per-step CSV ({"table": "path"}) whose
/// header is x0..x{n-1},u0..u{m-1} and whose row k holds x_ref[k], u_ref[k].
struct ScenarioConfig {
  std::string system;
  double dt = 0.01;
  std::optional<double> duration;  // seconds; steps = round(duration / dt)
  std::optional<int> steps;
  int iterations = 1;
  UpdateMode update_mode = UpdateMode::kNonlinearRollout;
  StopMode stop_mode = StopMode::kFixedCount;
  double cost_tolerance = 0.0;
  WeightSpec weights;
  Vector x_ref;
  Vector u_ref;
  std::string desired_table;
  Vector x0;
  RegularizationSetting reg;
  std::string output_dir = "out";
  std::vector<std::string> formats = {"trajectory", "gains", "costs"};
  // Directory that relative table paths are resolved against.
  std::filesystem::path base_dir;
};

/// Parses and validates; throws Error(kConfig) naming the JSON location.
ScenarioConfig ParseConfig(const std::string& json_text,
                           const std::filesystem::path& base_dir = {});
ScenarioConfig LoadConfig(const std::filesystem::path& path);

std::string ConfigToJson(const ScenarioConfig& config);

/// Bundled configuration for a scenario name, at its last iteration preset.
ScenarioConfig DefaultConfig(const std::string& name);

/// Horizon length of a validated config.
int StepCount(const ScenarioConfig& config);

TrackingProblem BuildProblem(const ScenarioConfig& config);

struct RunReport {
  std::vector<double> costs;
  SteadyGain gain;
  int iterations_used = 0;
  Trajectory trajectory;
  std::vector<std::string> files;  // only files actually written
};

/// Solves the configured scenario and writes the requested outputs to
/// `out_dir` (or the config's output directory when empty).
RunReport RunScenario(const ScenarioConfig& config,
                      const std::filesystem::path& out_dir = {});

/// Trajectory CSV: header t,x0..,u0..; N+1 rows, empty controls on the last.
std::string TrajectoryCsv(const Trajectory& traj, double dt);
std::string GainsJson(const SteadyGain& gain, int iteration);
std::string CostsCsv(const std::vector<double>& costs);

struct VerifySummary {
  int cases = 0;
  double max_control_deviation = 0.0;  // relative, vs the batch oracle
  double max_cost_deviation = 0.0;     // relative
  bool passed = false;
};

inline constexpr double kVerifyControlTolerance = 1e-8;
inline constexpr double kVerifyCostTolerance = 1e-10;

/// Compares the DP solver with the batch oracle on `cases` random problems.
VerifySummary VerifyAgainstOracle(std::uint64_t seed, int cases);

std::string FormatSummary(std::uint64_t seed, const VerifySummary& summary);

}  // namespace ilqt
