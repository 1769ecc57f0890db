/* C interface to the ilqt tracking-control library.
 *
 * All objects are opaque handles released with their *_free function.
 * Functions return ILQT_OK or an error status; the message for the most
 * recent failure on the calling thread is available from ilqt_last_error().
 * Matrices are exchanged row-major.
 */
#ifndef ILQT_ILQT_H_
#define ILQT_ILQT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ILQT_BUILDING_LIBRARY)
#define ILQT_API __attribute__((visibility("default")))
#else
#define ILQT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ilqt_status {
  ILQT_OK = 0,
  ILQT_ERR_INVALID_ARGUMENT = 1,
  ILQT_ERR_DIMENSION = 2,
  ILQT_ERR_CONFIG = 3,
  ILQT_ERR_SINGULAR = 4,
  ILQT_ERR_DIVERGED = 5,
  ILQT_ERR_IO = 6,
  ILQT_ERR_VERIFY_FAILED = 7,
  ILQT_ERR_INTERNAL = 99
} ilqt_status;

typedef enum ilqt_update_mode {
  ILQT_UPDATE_NONLINEAR_ROLLOUT = 0,
  ILQT_UPDATE_PAPER_LINEAR = 1
} ilqt_update_mode;

typedef struct ilqt_problem ilqt_problem;
typedef struct ilqt_solution ilqt_solution;
typedef struct ilqt_report ilqt_report;

ILQT_API const char* ilqt_last_error(void);
ILQT_API const char* ilqt_status_string(ilqt_status status);

/* Bundled scenarios. */
ILQT_API int ilqt_scenario_count(void);
ILQT_API const char* ilqt_scenario_name(int index);
ILQT_API const char* ilqt_scenario_description(int index);
/* Writes the scenario's default config as JSON into buf (NUL-terminated).
 * *needed receives the required size including the terminator. */
ILQT_API ilqt_status ilqt_scenario_default_config(const char* name, char* buf,
                                                  size_t len, size_t* needed);

/* Problems with constant diagonal weights and constant targets. */
ILQT_API ilqt_status ilqt_problem_create(int nx, int nu, int steps, double dt,
                                         ilqt_problem** out);
ILQT_API void ilqt_problem_free(ilqt_problem* problem);
ILQT_API ilqt_status ilqt_problem_set_weights(ilqt_problem* problem,
                                              const double* q_diag,
                                              const double* r_diag);
ILQT_API ilqt_status ilqt_problem_set_targets(ilqt_problem* problem,
                                              const double* x_ref,
                                              const double* u_ref);
ILQT_API ilqt_status ilqt_problem_set_initial_state(ilqt_problem* problem,
                                                    const double* x0);
/* Per-step targets: x_ref[k] (k < steps) and u_ref[k]. */
ILQT_API ilqt_status ilqt_problem_set_step_targets(ilqt_problem* problem,
                                                   int k, const double* x_ref,
                                                   const double* u_ref);
ILQT_API ilqt_status ilqt_problem_cost(const ilqt_problem* problem,
                                       const ilqt_solution* solution,
                                       double* cost);

/* Solves on a time-invariant linear plant x+ = A x + B u (one backward and
 * one forward pass). */
ILQT_API ilqt_status ilqt_solve_linear(const ilqt_problem* problem,
                                       const double* A, const double* B,
                                       ilqt_solution** out);
/* Runs iLQR on a bundled model (Euler-discretized at the problem's dt). */
ILQT_API ilqt_status ilqt_solve_model(const ilqt_problem* problem,
                                      const char* system, int iterations,
                                      ilqt_update_mode mode,
                                      ilqt_solution** out);
ILQT_API void ilqt_solution_free(ilqt_solution* solution);
ILQT_API int ilqt_solution_steps(const ilqt_solution* solution);
ILQT_API int ilqt_solution_iterations(const ilqt_solution* solution);
ILQT_API ilqt_status ilqt_solution_state(const ilqt_solution* solution, int k,
                                         double* x);
ILQT_API ilqt_status ilqt_solution_control(const ilqt_solution* solution,
                                           int k, double* u);
ILQT_API ilqt_status ilqt_solution_cost(const ilqt_solution* solution,
                                        int iteration, double* cost);
/* Gains of the last iteration's policy at step k (u = c - F x). */
ILQT_API ilqt_status ilqt_solution_gains(const ilqt_solution* solution, int k,
                                         double* c, double* F);
/* Steady gains (see SteadyGainOf); converged receives 0 or 1. */
ILQT_API ilqt_status ilqt_solution_steady_gains(const ilqt_solution* solution,
                                                double* c, double* F,
                                                int* step, int* converged);

/* Config-driven runs. iterations <= 0 keeps the config's count; out_dir may
 * be NULL to use the config's output directory. */
ILQT_API ilqt_status ilqt_run_config(const char* config_path, int iterations,
                                     const char* out_dir, ilqt_report** out);
ILQT_API void ilqt_report_free(ilqt_report* report);
ILQT_API int ilqt_report_iterations(const ilqt_report* report);
ILQT_API double ilqt_report_cost(const ilqt_report* report, int iteration);
ILQT_API int ilqt_report_nx(const ilqt_report* report);
ILQT_API int ilqt_report_nu(const ilqt_report* report);
ILQT_API ilqt_status ilqt_report_gains(const ilqt_report* report, double* c,
                                       double* F, int* step, int* converged);
ILQT_API ilqt_status ilqt_report_final_state(const ilqt_report* report,
                                             double* x);
ILQT_API int ilqt_report_file_count(const ilqt_report* report);
ILQT_API const char* ilqt_report_file(const ilqt_report* report, int index);

/* Oracle comparison on random small problems. Returns ILQT_ERR_VERIFY_FAILED
 * when a tolerance is exceeded; the summary line is written either way. */
typedef struct ilqt_verify_summary {
  int cases;
  double max_control_deviation;
  double max_cost_deviation;
  int passed;
} ilqt_verify_summary;

ILQT_API ilqt_status ilqt_verify(uint64_t seed, int cases,
                                 ilqt_verify_summary* summary, char* line,
                                 size_t line_len);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // ILQT_ILQT_H_
