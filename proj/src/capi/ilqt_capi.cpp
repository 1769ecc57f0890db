#include "ilqt/ilqt.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "ilqt/error.hpp"
#include "ilqt/ilqr.hpp"
#include "ilqt/linearize.hpp"
#include "ilqt/lqr.hpp"
#include "ilqt/models.hpp"
#include "ilqt/scenario.hpp"

struct ilqt_problem {
  ilqt::TrackingProblem problem;
};

struct ilqt_solution {
  ilqt::Trajectory trajectory;
  ilqt::Policy policy;  // last iteration
  std::vector<double> costs;
  int iterations = 0;
};

struct ilqt_report {
  ilqt::RunReport report;
};

namespace {

thread_local std::string last_error;

ilqt_status StatusOf(ilqt::ErrorCode code) {
  switch (code) {
    case ilqt::ErrorCode::kInvalidArgument: return ILQT_ERR_INVALID_ARGUMENT;
    case ilqt::ErrorCode::kDimensionMismatch: return ILQT_ERR_DIMENSION;
    case ilqt::ErrorCode::kConfig: return ILQT_ERR_CONFIG;
    case ilqt::ErrorCode::kSingular: return ILQT_ERR_SINGULAR;
    case ilqt::ErrorCode::kDiverged: return ILQT_ERR_DIVERGED;
    case ilqt::ErrorCode::kIo: return ILQT_ERR_IO;
  }
  return ILQT_ERR_INTERNAL;
}

ilqt_status Fail(ilqt_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
ilqt_status Guard(Body&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const ilqt::Error& e) {
    return Fail(StatusOf(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(ILQT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(ILQT_ERR_INTERNAL, e.what());
  }
}

ilqt_status NullArgument(const char* name) {
  return Fail(ILQT_ERR_INVALID_ARGUMENT, std::string(name) + " is NULL");
}

ilqt::Vector Read(const double* data, int size) {
  return Eigen::Map<const ilqt::Vector>(data, size);
}

ilqt::Matrix ReadRowMajor(const double* data, int rows, int cols) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(data, rows, cols);
}

void WriteRowMajor(const ilqt::Matrix& M, double* out) {
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                           Eigen::RowMajor>>(out, M.rows(), M.cols()) = M;
}

void WriteVector(const ilqt::Vector& v, double* out) {
  std::memcpy(out, v.data(), sizeof(double) * static_cast<std::size_t>(v.size()));
}

}  // namespace

extern "C" {

const char* ilqt_last_error(void) { return last_error.c_str(); }

const char* ilqt_status_string(ilqt_status status) {
  switch (status) {
    case ILQT_OK: return "ok";
    case ILQT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ILQT_ERR_DIMENSION: return "dimension mismatch";
    case ILQT_ERR_CONFIG: return "config error";
    case ILQT_ERR_SINGULAR: return "singular system";
    case ILQT_ERR_DIVERGED: return "diverged";
    case ILQT_ERR_IO: return "i/o error";
    case ILQT_ERR_VERIFY_FAILED: return "verification failed";
    case ILQT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int ilqt_scenario_count(void) {
  return static_cast<int>(ilqt::ScenarioNames().size());
}

const char* ilqt_scenario_name(int index) {
  const auto& names = ilqt::ScenarioNames();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  return names[index].c_str();
}

const char* ilqt_scenario_description(int index) {
  static const std::vector<std::string> descriptions = [] {
    std::vector<std::string> out;
    for (const auto& name : ilqt::ScenarioNames()) {
      out.push_back(ilqt::DefaultScenario(name).description);
    }
    return out;
  }();
  if (index < 0 || index >= static_cast<int>(descriptions.size())) return nullptr;
  return descriptions[index].c_str();
}

ilqt_status ilqt_scenario_default_config(const char* name, char* buf,
                                         size_t len, size_t* needed) {
  if (!name) return NullArgument("name");
  return Guard([&] {
    const std::string text = ilqt::ConfigToJson(ilqt::DefaultConfig(name));
    if (needed) *needed = text.size() + 1;
    if (!buf || len < text.size() + 1) {
      return Fail(ILQT_ERR_INVALID_ARGUMENT, "buffer too small for config");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return ILQT_OK;
  });
}

ilqt_status ilqt_problem_create(int nx, int nu, int steps, double dt,
                                ilqt_problem** out) {
  if (!out) return NullArgument("out");
  *out = nullptr;
  if (nx < 1 || nu < 1 || steps < 1 || !(dt > 0.0)) {
    return Fail(ILQT_ERR_INVALID_ARGUMENT,
                "problem needs nx, nu, steps >= 1 and dt > 0");
  }
  return Guard([&] {
    ilqt::WeightSpec weights{std::vector<double>(nx, 0.0),
                             std::vector<double>(nu, 0.0)};
    auto* p = new ilqt_problem{ilqt::TrackingProblem::Constant(
        weights, ilqt::Vector::Zero(nx), ilqt::Vector::Zero(nu),
        ilqt::Vector::Zero(nx), steps, dt)};
    *out = p;
    return ILQT_OK;
  });
}

void ilqt_problem_free(ilqt_problem* problem) { delete problem; }

ilqt_status ilqt_problem_set_weights(ilqt_problem* problem,
                                     const double* q_diag,
                                     const double* r_diag) {
  if (!problem) return NullArgument("problem");
  if (!q_diag) return NullArgument("q_diag");
  if (!r_diag) return NullArgument("r_diag");
  return Guard([&] {
    auto& p = problem->problem;
    const ilqt::Vector q = Read(q_diag, p.nx);
    const ilqt::Vector r = Read(r_diag, p.nu);
    // Reject here so a bad call leaves the previous weights in place.
    if (!q.allFinite() || !r.allFinite() || q.minCoeff() < 0.0 ||
        r.minCoeff() < 0.0) {
      throw ilqt::Error(ilqt::ErrorCode::kInvalidArgument,
                        "weights must be finite and nonnegative");
    }
    const ilqt::Matrix Q = q.asDiagonal();
    const ilqt::Matrix R = r.asDiagonal();
    p.Q.assign(p.steps, Q);
    p.R.assign(p.steps, R);
    return ILQT_OK;
  });
}

ilqt_status ilqt_problem_set_targets(ilqt_problem* problem,
                                     const double* x_ref,
                                     const double* u_ref) {
  if (!problem) return NullArgument("problem");
  if (!x_ref) return NullArgument("x_ref");
  if (!u_ref) return NullArgument("u_ref");
  auto& p = problem->problem;
  p.x_ref.assign(p.steps, Read(x_ref, p.nx));
  p.u_ref.assign(p.steps, Read(u_ref, p.nu));
  return ILQT_OK;
}

ilqt_status ilqt_problem_set_step_targets(ilqt_problem* problem, int k,
                                          const double* x_ref,
                                          const double* u_ref) {
  if (!problem) return NullArgument("problem");
  auto& p = problem->problem;
  if (k < 0 || k >= p.steps) {
    return Fail(ILQT_ERR_INVALID_ARGUMENT, "step index out of range");
  }
  if (x_ref) p.x_ref[k] = Read(x_ref, p.nx);
  if (u_ref) p.u_ref[k] = Read(u_ref, p.nu);
  return ILQT_OK;
}

ilqt_status ilqt_problem_set_initial_state(ilqt_problem* problem,
                                           const double* x0) {
  if (!problem) return NullArgument("problem");
  if (!x0) return NullArgument("x0");
  problem->problem.x0 = Read(x0, problem->problem.nx);
  return ILQT_OK;
}

ilqt_status ilqt_problem_cost(const ilqt_problem* problem,
                              const ilqt_solution* solution, double* cost) {
  if (!problem) return NullArgument("problem");
  if (!solution) return NullArgument("solution");
  if (!cost) return NullArgument("cost");
  return Guard([&] {
    *cost = ilqt::TrackingCost(solution->trajectory, problem->problem);
    return ILQT_OK;
  });
}

ilqt_status ilqt_solve_linear(const ilqt_problem* problem, const double* A,
                              const double* B, ilqt_solution** out) {
  if (!problem) return NullArgument("problem");
  if (!A) return NullArgument("A");
  if (!B) return NullArgument("B");
  if (!out) return NullArgument("out");
  *out = nullptr;
  return Guard([&] {
    const auto& p = problem->problem;
    if (const auto v = ilqt::Validate(p); !v.empty()) {
      return Fail(ILQT_ERR_INVALID_ARGUMENT, "invalid problem: " + ilqt::Describe(v));
    }
    const auto model = ilqt::LtvModel::Constant(
        ReadRowMajor(A, p.nx, p.nx), ReadRowMajor(B, p.nx, p.nu), p.steps);
    auto sol = std::make_unique<ilqt_solution>();
    sol->policy = ilqt::BackwardPass(model, p);
    sol->trajectory = ilqt::ForwardPass(sol->policy, model, p.x0);
    sol->costs.push_back(ilqt::TrackingCost(sol->trajectory, p));
    sol->iterations = 1;
    *out = sol.release();
    return ILQT_OK;
  });
}

ilqt_status ilqt_solve_model(const ilqt_problem* problem, const char* system,
                             int iterations, ilqt_update_mode mode,
                             ilqt_solution** out) {
  if (!problem) return NullArgument("problem");
  if (!system) return NullArgument("system");
  if (!out) return NullArgument("out");
  *out = nullptr;
  return Guard([&] {
    const auto& p = problem->problem;
    const auto dyn = ilqt::DiscretizeEuler(ilqt::ModelFor(system), p.dt);
    ilqt::IlqrOptions opts;
    opts.max_iterations = iterations;
    opts.update_mode = mode == ILQT_UPDATE_PAPER_LINEAR
                           ? ilqt::UpdateMode::kPaperLinear
                           : ilqt::UpdateMode::kNonlinearRollout;
    auto result = ilqt::SolveIlqr(p, dyn, opts);
    auto sol = std::make_unique<ilqt_solution>();
    sol->trajectory = std::move(result.trajectory);
    sol->policy = std::move(result.policies.back());
    sol->costs = std::move(result.costs);
    sol->iterations = result.iterations_used;
    *out = sol.release();
    return ILQT_OK;
  });
}

void ilqt_solution_free(ilqt_solution* solution) { delete solution; }

int ilqt_solution_steps(const ilqt_solution* solution) {
  return solution ? solution->trajectory.steps() : 0;
}

int ilqt_solution_iterations(const ilqt_solution* solution) {
  return solution ? solution->iterations : 0;
}

ilqt_status ilqt_solution_state(const ilqt_solution* solution, int k,
                                double* x) {
  if (!solution) return NullArgument("solution");
  if (!x) return NullArgument("x");
  if (k < 0 || k > solution->trajectory.steps()) {
    return Fail(ILQT_ERR_INVALID_ARGUMENT, "state index out of range");
  }
  WriteVector(solution->trajectory.x[k], x);
  return ILQT_OK;
}

ilqt_status ilqt_solution_control(const ilqt_solution* solution, int k,
                                  double* u) {
  if (!solution) return NullArgument("solution");
  if (!u) return NullArgument("u");
  if (k < 0 || k >= solution->trajectory.steps()) {
    return Fail(ILQT_ERR_INVALID_ARGUMENT, "control index out of range");
  }
  WriteVector(solution->trajectory.u[k], u);
  return ILQT_OK;
}

ilqt_status ilqt_solution_cost(const ilqt_solution* solution, int iteration,
                               double* cost) {
  if (!solution) return NullArgument("solution");
  if (!cost) return NullArgument("cost");
  if (iteration < 1 || iteration > static_cast<int>(solution->costs.size())) {
    return Fail(ILQT_ERR_INVALID_ARGUMENT, "iteration out of range");
  }
  *cost = solution->costs[iteration - 1];
  return ILQT_OK;
}

ilqt_status ilqt_solution_gains(const ilqt_solution* solution, int k,
                                double* c, double* F) {
  if (!solution) return NullArgument("solution");
  if (k < 0 || k >= solution->policy.steps()) {
    return Fail(ILQT_ERR_INVALID_ARGUMENT, "gain index out of range");
  }
  if (c) WriteVector(solution->policy.c[k], c);
  if (F) WriteRowMajor(solution->policy.F[k], F);
  return ILQT_OK;
}

ilqt_status ilqt_solution_steady_gains(const ilqt_solution* solution,
                                       double* c, double* F, int* step,
                                       int* converged) {
  if (!solution) return NullArgument("solution");
  return Guard([&] {
    const auto gain = ilqt::SteadyGainOf(solution->policy);
    if (c) WriteVector(gain.c, c);
    if (F) WriteRowMajor(gain.F, F);
    if (step) *step = gain.step;
    if (converged) *converged = gain.converged ? 1 : 0;
    return ILQT_OK;
  });
}

ilqt_status ilqt_run_config(const char* config_path, int iterations,
                            const char* out_dir, ilqt_report** out) {
  if (!config_path) return NullArgument("config_path");
  if (!out) return NullArgument("out");
  *out = nullptr;
  return Guard([&] {
    auto cfg = ilqt::LoadConfig(config_path);
    if (iterations > 0) cfg.iterations = iterations;
    auto report = std::make_unique<ilqt_report>();
    report->report =
        ilqt::RunScenario(cfg, out_dir ? std::filesystem::path(out_dir)
                                       : std::filesystem::path());
    *out = report.release();
    return ILQT_OK;
  });
}

void ilqt_report_free(ilqt_report* report) { delete report; }

int ilqt_report_iterations(const ilqt_report* report) {
  return report ? report->report.iterations_used : 0;
}

double ilqt_report_cost(const ilqt_report* report, int iteration) {
  if (!report || iteration < 1 ||
      iteration > static_cast<int>(report->report.costs.size())) {
    return -1.0;
  }
  return report->report.costs[iteration - 1];
}

int ilqt_report_nx(const ilqt_report* report) {
  return report ? static_cast<int>(report->report.gain.F.cols()) : 0;
}

int ilqt_report_nu(const ilqt_report* report) {
  return report ? static_cast<int>(report->report.gain.F.rows()) : 0;
}

ilqt_status ilqt_report_gains(const ilqt_report* report, double* c, double* F,
                              int* step, int* converged) {
  if (!report) return NullArgument("report");
  const auto& gain = report->report.gain;
  if (c) WriteVector(gain.c, c);
  if (F) WriteRowMajor(gain.F, F);
  if (step) *step = gain.step;
  if (converged) *converged = gain.converged ? 1 : 0;
  return ILQT_OK;
}

ilqt_status ilqt_report_final_state(const ilqt_report* report, double* x) {
  if (!report) return NullArgument("report");
  if (!x) return NullArgument("x");
  WriteVector(report->report.trajectory.x.back(), x);
  return ILQT_OK;
}

int ilqt_report_file_count(const ilqt_report* report) {
  return report ? static_cast<int>(report->report.files.size()) : 0;
}

const char* ilqt_report_file(const ilqt_report* report, int index) {
  if (!report || index < 0 ||
      index >= static_cast<int>(report->report.files.size())) {
    return nullptr;
  }
  return report->report.files[index].c_str();
}

ilqt_status ilqt_verify(uint64_t seed, int cases, ilqt_verify_summary* summary,
                        char* line, size_t line_len) {
  if (cases < 1) return Fail(ILQT_ERR_INVALID_ARGUMENT, "cases must be >= 1");
  return Guard([&] {
    const auto s = ilqt::VerifyAgainstOracle(seed, cases);
    if (summary) {
      summary->cases = s.cases;
      summary->max_control_deviation = s.max_control_deviation;
      summary->max_cost_deviation = s.max_cost_deviation;
      summary->passed = s.passed ? 1 : 0;
    }
    if (line && line_len > 0) {
      const std::string text = ilqt::FormatSummary(seed, s);
      const std::size_t n = std::min(text.size(), line_len - 1);
      std::memcpy(line, text.data(), n);
      line[n] = '\0';
    }
    if (!s.passed) {
      return Fail(ILQT_ERR_VERIFY_FAILED, "oracle deviation above tolerance");
    }
    return ILQT_OK;
  });
}

}  // extern "C"
