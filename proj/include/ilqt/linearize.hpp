#pragma once

#include <functional>

#include "ilqt/problem.hpp"

namespace ilqt {

/// Time-invariant continuous dynamics xdot = eval(x, u).
struct ContinuousDynamics {
  int nx = 0;
  int nu = 0;
  std::function<Vector(const Vector& x, const Vector& u)> eval;
};

/// Discrete dynamics x_{k+1} = step(k, x_k, u_k).
struct DiscreteDynamics {
  int nx = 0;
  int nu = 0;
  double dt = 0.0;
  std::function<Vector(int k, const Vector& x, const Vector& u)> step;
};

/// Forward Euler: step(k, x, u) = x + dt * eval(x, u).
DiscreteDynamics DiscretizeEuler(ContinuousDynamics dyn, double dt);

/// Classic fixed-step fourth-order Runge-Kutta with u held over the step.
/// Intended for rollout-fidelity experiments; gain reproduction uses Euler.
DiscreteDynamics DiscretizeRk4(ContinuousDynamics dyn, double dt);

/// Discrete plant given directly by constant matrices.
DiscreteDynamics LinearDynamics(const Matrix& A, const Matrix& B, double dt);

struct Jacobians {
  Matrix A;
  Matrix B;
};

inline constexpr double kDefaultFdEps = 1e-5;

/// Central-difference Jacobians of `dyn.step` at (k, x, u). The probe for
/// coordinate j is eps * max(1, |value_j|).
Jacobians JacobiansFd(const DiscreteDynamics& dyn, int k, const Vector& x,
                      const Vector& u, double eps = kDefaultFdEps);

/// Jacobians at every (x_k, u_k) of `traj`, k = 0..N-1.
LtvModel LinearizeTrajectory(const DiscreteDynamics& dyn,
                             const Trajectory& traj,
                             double eps = kDefaultFdEps);

}  // namespace ilqt
