#pragma once

#include <vector>

#include "ilqt/problem.hpp"

namespace ilqt {

enum class RegularizationMode { kAlways, kOnIllCondition };

/// Levenberg-Marquardt style shift of the gain denominator W by lambda * I.
struct RegularizationSetting {
  double lambda = 1e-9;
  RegularizationMode mode = RegularizationMode::kOnIllCondition;
  // Shift applied when the reciprocal condition number of W falls below this.
  double condition_threshold = 1e-12;
};

/// Output of the backward pass, indexed by forward step.
///
/// c[k], F[k] give the control law u_k = c[k] - F[k] x_k for k = 0..N-1.
/// P[k], v[k] (k = 0..N) describe the cost-to-go from x_k,
/// x' P x - 2 v' x + const; P[N] and v[N] are zero.
struct Policy {
  std::vector<Vector> c;
  std::vector<Matrix> F;
  std::vector<Matrix> P;
  std::vector<Vector> v;

  int steps() const { return static_cast<int>(c.size()); }
};

Policy BackwardPass(const LtvModel& model, const TrackingProblem& problem,
                    const RegularizationSetting& reg = {});

/// Applies the policy to the linear model starting from `x0`.
Trajectory ForwardPass(const Policy& policy, const LtvModel& model,
                       const Vector& x0);

struct SteadyGain {
  Vector c;
  Matrix F;
  int step = 0;
  bool converged = false;
};

/// Gains far from the terminal time.
///
/// With `step < 0` the step is min(1, N-1): under the usual zero-initialized
/// iLQR nominal, step 0 is linearized at the initial state while every later
/// step shares one linearization point. `converged` is true when the gains at
/// `step` and `step + 1` agree to 1e-6 relative in max norm.
SteadyGain SteadyGainOf(const Policy& policy, int step = -1);

}  // namespace ilqt
