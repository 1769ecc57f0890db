#include "ilqt/ilqr.hpp"

#include <cmath>
#include <string>

#include "ilqt/error.hpp"

namespace ilqt {

namespace {

double MaxNorm(const std::vector<Vector>& seq) {
  double out = 0.0;
  for (const auto& v : seq) {
    if (v.size()) out = std::max(out, v.cwiseAbs().maxCoeff());
  }
  return out;
}

std::vector<Vector> Difference(const std::vector<Vector>& a,
                               const std::vector<Vector>& b) {
  std::vector<Vector> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

void CheckFinite(const Trajectory& traj, int iteration) {
  for (std::size_t k = 0; k < traj.x.size(); ++k) {
    if (!traj.x[k].allFinite()) {
      throw Error(ErrorCode::kDiverged,
                  "non-finite state at iteration " + std::to_string(iteration) +
                      ", step " + std::to_string(k));
    }
  }
  for (std::size_t k = 0; k < traj.u.size(); ++k) {
    if (!traj.u[k].allFinite()) {
      throw Error(ErrorCode::kDiverged,
                  "non-finite control at iteration " +
                      std::to_string(iteration) + ", step " + std::to_string(k));
    }
  }
}

}  // namespace

Trajectory InitialTrajectory(const TrackingProblem& problem) {
  Trajectory traj = Trajectory::Zero(problem.nx, problem.nu, problem.steps);
  traj.x[0] = problem.x0;
  return traj;
}

IncrementTargets MakeIncrementTargets(const TrackingProblem& p,
                                      const Trajectory& nominal) {
  if (nominal.steps() != p.steps || nominal.x.size() != nominal.u.size() + 1) {
    throw DimensionError("nominal trajectory does not match the horizon");
  }
  IncrementTargets t;
  t.dx_ref.reserve(p.steps);
  t.du_ref.reserve(p.steps);
  for (int k = 0; k < p.steps; ++k) {
    t.dx_ref.push_back(p.x_ref[k] - nominal.x[k + 1]);
    t.du_ref.push_back(p.u_ref[k] - nominal.u[k]);
  }
  return t;
}

Trajectory ApplyUpdate(const Trajectory& nominal, const std::vector<Vector>& dx,
                       const std::vector<Vector>& du) {
  if (dx.size() != nominal.x.size() || du.size() != nominal.u.size()) {
    throw DimensionError("increment lengths do not match the nominal");
  }
  if (!dx.empty() && dx[0].size() && dx[0].cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "initial state increment must be zero");
  }
  Trajectory out;
  out.x.reserve(dx.size());
  out.u.reserve(du.size());
  for (std::size_t k = 0; k < dx.size(); ++k) {
    out.x.push_back(nominal.x[k] + dx[k]);
  }
  for (std::size_t k = 0; k < du.size(); ++k) {
    out.u.push_back(nominal.u[k] + du[k]);
  }
  return out;
}

Trajectory Rollout(const DiscreteDynamics& dyn, const Vector& x0,
                   const std::vector<Vector>& controls) {
  Trajectory traj;
  traj.x.reserve(controls.size() + 1);
  traj.x.push_back(x0);
  traj.u = controls;
  for (std::size_t k = 0; k < controls.size(); ++k) {
    traj.x.push_back(dyn.step(static_cast<int>(k), traj.x[k], controls[k]));
  }
  return traj;
}

Trajectory RolloutClosedLoop(const DiscreteDynamics& dyn,
                             const Trajectory& nominal, const Policy& policy) {
  const int N = nominal.steps();
  if (policy.steps() != N) {
    throw DimensionError("policy and nominal horizons differ");
  }
  Trajectory traj;
  traj.x.reserve(N + 1);
  traj.u.reserve(N);
  traj.x.push_back(nominal.x[0]);
  for (int k = 0; k < N; ++k) {
    const Vector& x = traj.x.back();
    Vector u = nominal.u[k] + policy.c[k] - policy.F[k] * (x - nominal.x[k]);
    Vector next = dyn.step(k, x, u);
    traj.u.push_back(std::move(u));
    traj.x.push_back(std::move(next));
  }
  return traj;
}

IlqrSolution SolveIlqr(const TrackingProblem& problem,
                       const DiscreteDynamics& dyn, const IlqrOptions& opts) {
  if (const auto violations = Validate(problem); !violations.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid problem: " + Describe(violations));
  }
  if (dyn.nx != problem.nx || dyn.nu != problem.nu) {
    throw DimensionError("dynamics dimensions do not match the problem");
  }
  if (opts.max_iterations < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iterations must be >= 1");
  }
  if (!(opts.cost_tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "cost_tolerance must be >= 0");
  }

  Trajectory nominal = opts.warm_start ? *opts.warm_start
                                       : InitialTrajectory(problem);
  if (nominal.steps() != problem.steps ||
      nominal.x.size() != nominal.u.size() + 1) {
    throw DimensionError("warm start does not match the horizon");
  }
  nominal.x[0] = problem.x0;

  IlqrSolution sol;
  // The increment problem shares weights with the original; only the
  // targets change from iteration to iteration.
  TrackingProblem increments = problem;
  increments.x0 = Vector::Zero(problem.nx);

  for (int it = 1; it <= opts.max_iterations; ++it) {
    try {
      const LtvModel model = LinearizeTrajectory(dyn, nominal, opts.fd_eps);
      auto targets = MakeIncrementTargets(problem, nominal);
      increments.x_ref = std::move(targets.dx_ref);
      increments.u_ref = std::move(targets.du_ref);
      Policy policy = BackwardPass(model, increments, opts.reg);

      Trajectory next;
      if (opts.update_mode == UpdateMode::kPaperLinear) {
        const Trajectory delta =
            ForwardPass(policy, model, Vector::Zero(problem.nx));
        next = ApplyUpdate(nominal, delta.x, delta.u);
      } else {
        next = RolloutClosedLoop(dyn, nominal, policy);
      }
      CheckFinite(next, it);

      sol.control_increments.push_back(MaxNorm(Difference(next.u, nominal.u)));
      sol.state_increments.push_back(MaxNorm(Difference(next.x, nominal.x)));

      const Trajectory replay = opts.update_mode == UpdateMode::kPaperLinear
                                    ? Rollout(dyn, problem.x0, next.u)
                                    : next;
      CheckFinite(replay, it);
      sol.costs.push_back(TrackingCost(replay, problem));
      sol.policies.push_back(std::move(policy));
      nominal = std::move(next);
    } catch (const Error& e) {
      if (std::string(e.what()).find("iteration") != std::string::npos) {
        throw;
      }
      throw Error(e.code(), std::string(e.what()) + " (iteration " +
                                std::to_string(it) + ")");
    }
    sol.iterations_used = it;

    if (opts.stop_mode == StopMode::kCostDelta && sol.costs.size() >= 2) {
      const double prev = sol.costs[sol.costs.size() - 2];
      if (std::abs(sol.costs.back() - prev) <=
          opts.cost_tolerance * std::max(1.0, prev)) {
        break;
      }
    }
  }
  sol.trajectory = std::move(nominal);
  return sol;
}

}  // namespace ilqt
