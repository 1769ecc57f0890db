#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ilqt/linearize.hpp"
#include "ilqt/problem.hpp"

namespace ilqt {

struct RayleighParams {
  double a = 1.4;  // nonlinearity
  double b = 4.0;  // control gain
};

// theta = 0 is the upright equilibrium.
struct CartPoleParams {
  double g = 9.81;
  double m = 1.0;  // pendulum mass
  double M = 1.0;  // cart mass
  double l = 1.0;  // length to the pendulum's center of mass
};

struct TwoLinkParams {
  double g = 9.81;
  double M1 = 1.0;
  double M2 = 1.0;
  double L1 = 1.0;
  double L2 = 1.0;

  double mass_ratio() const { return M2 / (M1 + M2); }
};

struct QuadcopterParams {
  double g = 9.81;
  double l = 0.23;
  double mass = 0.65;
  double Jx = 7.5e-3;
  double Jy = 7.5e-3;
  double Jz = 1.3e-2;

  double a1() const { return (Jy - Jz) / Jx; }
  double a2() const { return (Jz - Jx) / Jy; }
  double a3() const { return (Jx - Jy) / Jz; }
  double b1() const { return l / Jx; }
  double b2() const { return l / Jy; }
  double b3() const { return l / Jz; }
};

/// State (position, velocity), control (u).
Vector RayleighDynamics(const Vector& x, const Vector& u,
                        const RayleighParams& p = {});
/// State (x, xdot, theta, thetadot), control (horizontal force).
Vector CartPoleDynamics(const Vector& x, const Vector& u,
                        const CartPoleParams& p = {});
/// State (theta1, omega1, theta2, omega2), control (T1, T2).
Vector TwoLinkDynamics(const Vector& x, const Vector& u,
                       const TwoLinkParams& p = {});

/// Quadcopter state layout.
enum QuadState : int {
  kRoll, kRollRate, kPitch, kPitchRate, kYaw, kYawRate,
  kPosX, kVelX, kPosY, kVelY, kPosZ, kVelZ,
  kThrust, kTorqueRoll, kTorquePitch, kTorqueYaw,
  kQuadStateDim
};
/// Control: rates of (thrust, roll torque, pitch torque, yaw torque).
Vector QuadcopterDynamics(const Vector& x, const Vector& u,
                          const QuadcopterParams& p = {});

ContinuousDynamics RayleighModel(const RayleighParams& p = {});
ContinuousDynamics CartPoleModel(const CartPoleParams& p = {});
ContinuousDynamics TwoLinkModel(const TwoLinkParams& p = {});
ContinuousDynamics QuadcopterModel(const QuadcopterParams& p = {});

/// One bundled benchmark run.
struct ScenarioDefaults {
  std::string name;
  std::string description;
  double dt = 0.01;
  double duration = 10.0;
  Vector x0;
  Vector x_ref;
  Vector u_ref;
  WeightSpec weights;
  // Iteration counts the benchmark is reported at; bundled configs run the
  // last one.
  std::vector<int> iteration_presets;
};

/// rayleigh, cartpole, cartpole_soft, twolink, quadcopter.
const std::vector<std::string>& ScenarioNames();

/// Throws a config error for an unknown name.
ScenarioDefaults DefaultScenario(std::string_view name);

/// Continuous plant behind a scenario or model identifier.
ContinuousDynamics ModelFor(std::string_view name);

}  // namespace ilqt
