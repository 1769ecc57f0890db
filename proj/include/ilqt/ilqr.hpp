#pragma once

#include <optional>
#include <vector>

#include "ilqt/linearize.hpp"
#include "ilqt/lqr.hpp"
#include "ilqt/problem.hpp"

namespace ilqt {

enum class StopMode { kFixedCount, kCostDelta };

enum class UpdateMode {
  // x^{i+1} = x^i + dx with dx from the linearized increment model,
  // dx_{k+1} = A_k dx_k + B_k du_k, dx_0 = 0. The nominal's dynamic defect
  // is not modeled, so a zero nominal with zero increment targets stays put.
  kPaperLinear,
  // The increment policy is applied in closed loop on the plant:
  // u_k = u^i_k + c_k - F_k (x_k - x^i_k), x_{k+1} = step(k, x_k, u_k).
  kNonlinearRollout,
};

struct IlqrOptions {
  int max_iterations = 1;
  StopMode stop_mode = StopMode::kFixedCount;
  double cost_tolerance = 0.0;
  UpdateMode update_mode = UpdateMode::kNonlinearRollout;
  RegularizationSetting reg;
  double fd_eps = kDefaultFdEps;
  // Replaces the zero initial trajectory when set.
  std::optional<Trajectory> warm_start;
};

struct IlqrSolution {
  Trajectory trajectory;
  std::vector<Policy> policies;
  // Tracking cost of each iteration's controls replayed through the plant.
  std::vector<double> costs;
  // Max-norm of the control and state increments of each iteration.
  std::vector<double> control_increments;
  std::vector<double> state_increments;
  int iterations_used = 0;
};

/// x_0 = problem.x0, every other state and every control zero.
Trajectory InitialTrajectory(const TrackingProblem& problem);

struct IncrementTargets {
  std::vector<Vector> dx_ref;  // x_ref[k] - x^i_{k+1}
  std::vector<Vector> du_ref;  // u_ref[k] - u^i_k
};

IncrementTargets MakeIncrementTargets(const TrackingProblem& problem,
                                      const Trajectory& nominal);

/// Elementwise x + dx, u + du. `dx` has N+1 entries and dx[0] must be zero.
Trajectory ApplyUpdate(const Trajectory& nominal, const std::vector<Vector>& dx,
                       const std::vector<Vector>& du);

/// Open-loop replay of `controls` through the plant from `x0`.
Trajectory Rollout(const DiscreteDynamics& dyn, const Vector& x0,
                   const std::vector<Vector>& controls);

/// Closed-loop application of an increment policy around `nominal`.
Trajectory RolloutClosedLoop(const DiscreteDynamics& dyn,
                             const Trajectory& nominal, const Policy& policy);

IlqrSolution SolveIlqr(const TrackingProblem& problem,
                       const DiscreteDynamics& dyn, const IlqrOptions& opts);

}  // namespace ilqt
