// Command-line front end. Talks to the library only through ilqt.h.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ilqt/ilqt.h"

namespace {

struct RunResult {
  int status = 0;
  std::string text;
};

std::string FormatVector(const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(6);
  os << "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ", ";
    os << values[i];
  }
  os << "]";
  return os.str();
}

RunResult RunOne(const std::string& config, int iterations,
                 const std::string& out_dir) {
  RunResult result;
  ilqt_report* report = nullptr;
  const ilqt_status status = ilqt_run_config(
      config.c_str(), iterations, out_dir.empty() ? nullptr : out_dir.c_str(),
      &report);
  if (status != ILQT_OK) {
    result.status = 1;
    result.text = config + ": " + ilqt_status_string(status) + ": " +
                  ilqt_last_error() + "\n";
    return result;
  }

  std::ostringstream os;
  os.precision(10);
  os << config << "\n";
  for (int i = 1; i <= ilqt_report_iterations(report); ++i) {
    os << "  iteration " << i << " cost " << ilqt_report_cost(report, i) << "\n";
  }
  const int nx = ilqt_report_nx(report);
  const int nu = ilqt_report_nu(report);
  std::vector<double> c(nu), F(static_cast<std::size_t>(nu) * nx);
  int step = 0, converged = 0;
  ilqt_report_gains(report, c.data(), F.data(), &step, &converged);
  os << "  steady gains at step " << step
     << (converged ? " (converged)" : " (not converged)") << "\n";
  os << "    c = " << FormatVector(c) << "\n";
  for (int r = 0; r < nu; ++r) {
    std::vector<double> row(F.begin() + r * nx, F.begin() + (r + 1) * nx);
    os << "    F[" << r << "] = " << FormatVector(row) << "\n";
  }
  for (int i = 0; i < ilqt_report_file_count(report); ++i) {
    os << "  wrote " << ilqt_report_file(report, i) << "\n";
  }
  ilqt_report_free(report);
  result.text = os.str();
  return result;
}

int CommandRun(const std::vector<std::string>& configs, int iterations,
               const std::string& out_dir, int jobs) {
  std::vector<RunResult> results(configs.size());
  auto out_for = [&](std::size_t i) {
    if (out_dir.empty() || configs.size() == 1) return out_dir;
    return (std::filesystem::path(out_dir) /
            std::filesystem::path(configs[i]).stem())
        .string();
  };
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      results[i] = RunOne(configs[i], iterations, out_for(i));
    }
  };
  const int threads =
      std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = 0;
  for (const auto& r : results) {
    (r.status ? std::cerr : std::cout) << r.text;
    status = std::max(status, r.status);
  }
  return status;
}

int CommandVerify(std::uint64_t seed, int cases) {
  ilqt_verify_summary summary{};
  char line[256] = {0};
  const ilqt_status status = ilqt_verify(seed, cases, &summary, line, sizeof(line));
  if (status == ILQT_ERR_INVALID_ARGUMENT) {
    std::cerr << "verify: " << ilqt_last_error() << "\n";
    return 2;
  }
  if (line[0]) std::cout << line << "\n";
  if (status != ILQT_OK) {
    std::cerr << "verify: " << ilqt_status_string(status) << ": "
              << ilqt_last_error() << "\n";
    return 1;
  }
  return 0;
}

int CommandList() {
  for (int i = 0; i < ilqt_scenario_count(); ++i) {
    std::printf("%-14s %s\n", ilqt_scenario_name(i), ilqt_scenario_description(i));
  }
  return 0;
}

int CommandDefaults(const std::string& name, const std::string& write_to) {
  std::size_t needed = 0;
  ilqt_scenario_default_config(name.c_str(), nullptr, 0, &needed);
  if (needed == 0) {
    std::cerr << "defaults: " << ilqt_last_error() << "\n";
    return 1;
  }
  std::string buf(needed, '\0');
  if (ilqt_scenario_default_config(name.c_str(), buf.data(), buf.size(),
                                   &needed) != ILQT_OK) {
    std::cerr << "defaults: " << ilqt_last_error() << "\n";
    return 1;
  }
  buf.resize(needed - 1);
  if (write_to.empty()) {
    std::cout << buf;
    return 0;
  }
  std::ofstream out(write_to, std::ios::binary);
  out << buf;
  if (!out) {
    std::cerr << "defaults: cannot write " << write_to << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory-tracking LQR / iLQR toolkit"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Solve one or more scenario configs");
  std::vector<std::string> configs;
  int iterations = 0;
  std::string out_dir;
  int jobs = 1;
  run->add_option("--config", configs, "Scenario JSON file (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--iterations", iterations, "Override the iteration count")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--jobs", jobs, "Configs solved in parallel")
      ->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Compare the solver with the batch oracle");
  std::uint64_t seed = 42;
  int cases = 100;
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--cases", cases, "Number of random problems");

  auto* list = app.add_subcommand("list", "List bundled scenarios");

  auto* defaults = app.add_subcommand("defaults", "Print a scenario's default config");
  std::string scenario;
  std::string write_to;
  defaults->add_option("scenario", scenario, "Scenario name")->required();
  defaults->add_option("--write", write_to, "Write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  if (*run) return CommandRun(configs, iterations, out_dir, jobs);
  if (*verify) {
    if (cases < 1) {
      std::cerr << "verify: --cases must be >= 1\n" << app.help();
      return 2;
    }
    return CommandVerify(seed, cases);
  }
  if (*list) return CommandList();
  if (*defaults) return CommandDefaults(scenario, write_to);
  return 0;
}
