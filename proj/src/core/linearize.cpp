#include "ilqt/linearize.hpp"

#include <cmath>
#include <string>

#include "ilqt/error.hpp"

namespace ilqt {

namespace {

void RequirePositive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be positive and finite");
  }
}

Vector Probe(const DiscreteDynamics& dyn, int k, const Vector& x,
             const Vector& u) {
  Vector out = dyn.step(k, x, u);
  if (out.size() != dyn.nx) {
    throw DimensionError("dynamics returned " + std::to_string(out.size()) +
                         " entries, expected " + std::to_string(dyn.nx));
  }
  if (!out.allFinite()) {
    throw Error(ErrorCode::kDiverged,
                "non-finite dynamics output at a finite-difference probe");
  }
  return out;
}

}  // namespace

DiscreteDynamics DiscretizeEuler(ContinuousDynamics dyn, double dt) {
  RequirePositive(dt, "dt");
  const int nx = dyn.nx;
  const int nu = dyn.nu;
  return DiscreteDynamics{
      nx, nu, dt,
      [f = std::move(dyn.eval), dt](int, const Vector& x, const Vector& u) {
        return Vector(x + dt * f(x, u));
      }};
}

DiscreteDynamics DiscretizeRk4(ContinuousDynamics dyn, double dt) {
  RequirePositive(dt, "dt");
  const int nx = dyn.nx;
  const int nu = dyn.nu;
  return DiscreteDynamics{
      nx, nu, dt,
      [f = std::move(dyn.eval), dt](int, const Vector& x, const Vector& u) {
        const Vector k1 = f(x, u);
        const Vector k2 = f(x + 0.5 * dt * k1, u);
        const Vector k3 = f(x + 0.5 * dt * k2, u);
        const Vector k4 = f(x + dt * k3, u);
        return Vector(x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
      }};
}

DiscreteDynamics LinearDynamics(const Matrix& A, const Matrix& B, double dt) {
  if (A.rows() != A.cols() || B.rows() != A.rows()) {
    throw DimensionError("linear plant matrices have inconsistent shapes");
  }
  return DiscreteDynamics{
      static_cast<int>(A.rows()), static_cast<int>(B.cols()), dt,
      [A, B](int, const Vector& x, const Vector& u) {
        return Vector(A * x + B * u);
      }};
}

Jacobians JacobiansFd(const DiscreteDynamics& dyn, int k, const Vector& x,
                      const Vector& u, double eps) {
  RequirePositive(eps, "finite-difference eps");
  if (x.size() != dyn.nx || u.size() != dyn.nu) {
    throw DimensionError("linearization point does not match dynamics");
  }
  Jacobians J{Matrix(dyn.nx, dyn.nx), Matrix(dyn.nx, dyn.nu)};
  Vector xp = x;
  for (int j = 0; j < dyn.nx; ++j) {
    const double h = eps * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    const Vector hi = Probe(dyn, k, xp, u);
    xp[j] = x[j] - h;
    const Vector lo = Probe(dyn, k, xp, u);
    xp[j] = x[j];
    J.A.col(j) = (hi - lo) / (2.0 * h);
  }
  Vector up = u;
  for (int j = 0; j < dyn.nu; ++j) {
    const double h = eps * std::max(1.0, std::abs(u[j]));
    up[j] = u[j] + h;
    const Vector hi = Probe(dyn, k, x, up);
    up[j] = u[j] - h;
    const Vector lo = Probe(dyn, k, x, up);
    up[j] = u[j];
    J.B.col(j) = (hi - lo) / (2.0 * h);
  }
  return J;
}

LtvModel LinearizeTrajectory(const DiscreteDynamics& dyn,
                             const Trajectory& traj, double eps) {
  const int N = traj.steps();
  if (traj.x.size() != static_cast<std::size_t>(N + 1)) {
    throw DimensionError("trajectory must hold N+1 states and N controls");
  }
  LtvModel model;
  model.A.reserve(N);
  model.B.reserve(N);
  for (int k = 0; k < N; ++k) {
    try {
      auto J = JacobiansFd(dyn, k, traj.x[k], traj.u[k], eps);
      model.A.push_back(std::move(J.A));
      model.B.push_back(std::move(J.B));
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " (step " +
                                std::to_string(k) + ")");
    }
  }
  return model;
}

}  // namespace ilqt
