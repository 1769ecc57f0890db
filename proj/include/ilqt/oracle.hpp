#pragma once

#include <cstdint>
#include <random>

#include "ilqt/lqr.hpp"
#include "ilqt/problem.hpp"

namespace ilqt {

/// Direct minimizer of the tracking cost over the stacked controls.
struct BatchSolution {
  Vector u_stacked;  // u_0, ..., u_{N-1} concatenated
  Trajectory trajectory;
  double cost = 0.0;
};

inline constexpr int kBatchMaxUnknowns = 512;

/// Writes every x_{k+1} as an affine map of the stacked controls, assembles
/// the quadratic cost and solves its normal equations. Independent of the
/// dynamic-programming recursion; intended for small instances only.
BatchSolution SolveBatch(const LtvModel& model, const TrackingProblem& problem,
                         const RegularizationSetting& reg = {});

/// Infinite-horizon continuous LQR gain K = R^-1 B' P for xdot = A x + B u,
/// with P from the stable invariant subspace of the Hamiltonian matrix.
Matrix ContinuousLqrGain(const Matrix& A, const Matrix& B, const Matrix& Q,
                         const Matrix& R);

struct RandomCase {
  LtvModel model;
  TrackingProblem problem;
};

/// Random LTV tracking problem with nx <= 3, nu <= 2, N <= 6 and positive
/// definite diagonal weights.
RandomCase RandomSmallCase(std::mt19937_64& rng);

}  // namespace ilqt
