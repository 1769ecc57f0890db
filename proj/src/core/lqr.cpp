#include "ilqt/lqr.hpp"

#include <cmath>
#include <string>

#include "ilqt/error.hpp"

namespace ilqt {

namespace {

double ReciprocalCondition(const Matrix& W) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(W, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double hi = ev.cwiseAbs().maxCoeff();
  if (hi == 0.0) return 0.0;
  return std::max(ev.minCoeff(), 0.0) / hi;
}

// Factorizes W (shifted per `reg`) or throws with the offending step.
Eigen::LLT<Matrix> FactorGainMatrix(Matrix W, const RegularizationSetting& reg,
                                    int step) {
  const bool shift = reg.mode == RegularizationMode::kAlways ||
                     ReciprocalCondition(W) < reg.condition_threshold;
  if (shift) W.diagonal().array() += reg.lambda;
  Eigen::LLT<Matrix> llt(W);
  if (llt.info() != Eigen::Success || ReciprocalCondition(W) == 0.0) {
    throw Error(ErrorCode::kSingular,
                "gain matrix W is singular at step " + std::to_string(step));
  }
  return llt;
}

}  // namespace

Policy BackwardPass(const LtvModel& model, const TrackingProblem& p,
                    const RegularizationSetting& reg) {
  CheckModel(model, p);
  if (reg.lambda < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "regularization lambda < 0");
  }
  const int N = p.steps;
  Policy policy;
  policy.c.resize(N);
  policy.F.resize(N);
  policy.P.resize(N + 1);
  policy.v.resize(N + 1);
  policy.P[N] = Matrix::Zero(p.nx, p.nx);
  policy.v[N] = Vector::Zero(p.nx);

  for (int k = N - 1; k >= 0; --k) {
    const Matrix& A = model.A[k];
    const Matrix& B = model.B[k];
    const Matrix& Q = p.Q[k];
    const Matrix& R = p.R[k];
    const Matrix QP = Q + policy.P[k + 1];
    const Vector target = Q * p.x_ref[k] + policy.v[k + 1];
    const Matrix QPB = QP * B;

    const auto W = FactorGainMatrix(B.transpose() * QPB + R, reg, k);
    const Vector c = W.solve(B.transpose() * target + R * p.u_ref[k]);
    const Matrix F = W.solve(QPB.transpose() * A);

    const Matrix Z = A - B * F;
    Matrix P = Z.transpose() * QP * Z + F.transpose() * R * F;
    policy.P[k] = 0.5 * (P + P.transpose());
    policy.v[k] = Z.transpose() * (target - QPB * c) +
                  F.transpose() * (R * (c - p.u_ref[k]));
    policy.c[k] = c;
    policy.F[k] = F;
  }
  return policy;
}

Trajectory ForwardPass(const Policy& policy, const LtvModel& model,
                       const Vector& x0) {
  const int N = policy.steps();
  if (model.steps() != N || model.B.size() != model.A.size()) {
    throw DimensionError("policy and model horizons differ");
  }
  Trajectory traj;
  traj.x.reserve(N + 1);
  traj.u.reserve(N);
  traj.x.push_back(x0);
  for (int k = 0; k < N; ++k) {
    const Vector& x = traj.x.back();
    if (policy.F[k].cols() != x.size() || model.A[k].cols() != x.size() ||
        model.B[k].cols() != policy.c[k].size()) {
      throw DimensionError("policy/model shape mismatch at step " +
                           std::to_string(k));
    }
    Vector u = policy.c[k] - policy.F[k] * x;
    Vector next = model.A[k] * x + model.B[k] * u;
    traj.u.push_back(std::move(u));
    traj.x.push_back(std::move(next));
  }
  return traj;
}

SteadyGain SteadyGainOf(const Policy& policy, int step) {
  const int N = policy.steps();
  if (N == 0) throw Error(ErrorCode::kInvalidArgument, "empty policy");
  if (step < 0) step = std::min(1, N - 1);
  if (step >= N) {
    throw Error(ErrorCode::kInvalidArgument,
                "gain step " + std::to_string(step) + " outside horizon");
  }
  SteadyGain gain{policy.c[step], policy.F[step], step, false};
  if (step + 1 < N) {
    const double scale =
        std::max(gain.c.cwiseAbs().maxCoeff(), gain.F.cwiseAbs().maxCoeff());
    const double diff =
        std::max((policy.c[step + 1] - gain.c).cwiseAbs().maxCoeff(),
                 (policy.F[step + 1] - gain.F).cwiseAbs().maxCoeff());
    gain.converged = scale > 0.0 ? diff <= 1e-6 * scale : diff == 0.0;
  }
  return gain;
}

}  // namespace ilqt
