#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ilqt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Constant diagonal weights, expanded to per-step Q_k and R_k.
struct WeightSpec {
  std::vector<double> q_diag;
  std::vector<double> r_diag;
};

/// A discrete tracking problem over `steps` transitions.
///
/// Step k (0 <= k < steps) penalizes the state it produces, x_{k+1}, against
/// x_ref[k] with Q[k], and the control u_k against u_ref[k] with R[k]. The
/// initial state is fixed and never penalized.
struct TrackingProblem {
  int nx = 0;
  int nu = 0;
  int steps = 0;
  double dt = 0.0;
  std::vector<Matrix> Q;
  std::vector<Matrix> R;
  std::vector<Vector> x_ref;
  std::vector<Vector> u_ref;
  Vector x0;

  /// Builds a problem with time-invariant diagonal weights and targets.
  static TrackingProblem Constant(const WeightSpec& weights,
                                  const Vector& x_ref, const Vector& u_ref,
                                  const Vector& x0, int steps, double dt);
};

/// Per-step matrices of x_{k+1} = A_k x_k + B_k u_k.
struct LtvModel {
  std::vector<Matrix> A;
  std::vector<Matrix> B;

  int steps() const { return static_cast<int>(A.size()); }
  static LtvModel Constant(const Matrix& A, const Matrix& B, int steps);
};

/// States x_0..x_N and controls u_0..u_{N-1}.
struct Trajectory {
  std::vector<Vector> x;
  std::vector<Vector> u;

  int steps() const { return static_cast<int>(u.size()); }
  static Trajectory Zero(int nx, int nu, int steps);
};

struct Violation {
  std::string field;
  int index = -1;  // -1 when the violation concerns the whole field
  std::string message;
};

/// Reports every broken invariant of `problem`; never throws.
std::vector<Violation> Validate(const TrackingProblem& problem);

std::string Describe(const std::vector<Violation>& violations);

/// Sum over k of the weighted squared state and control deviations.
/// Throws a dimension error if `traj` does not fit `problem`.
double TrackingCost(const Trajectory& traj, const TrackingProblem& problem);

/// Throws unless `model` has `problem.steps` matrices of matching shape.
void CheckModel(const LtvModel& model, const TrackingProblem& problem);

}  // namespace ilqt
