#include "ilqt/models.hpp"

#include <cmath>
#include <numbers>

#include "ilqt/error.hpp"

namespace ilqt {

Vector RayleighDynamics(const Vector& x, const Vector& u,
                        const RayleighParams& p) {
  Vector dx(2);
  dx << x[1], -x[0] + p.a * (1.0 - x[1] * x[1] / 10.0) * x[1] + p.b * u[0];
  return dx;
}

Vector CartPoleDynamics(const Vector& x, const Vector& u,
                        const CartPoleParams& p) {
  const double theta = x[2];
  const double omega = x[3];
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double den = p.M + p.m * (1.0 - c * c);
  Vector dx(4);
  dx << x[1],
      (-p.m * p.l * omega * omega * s + p.m * p.g * s * c + u[0]) / den,
      omega,
      (-p.m * p.l * omega * omega * s * c + (p.M + p.m) * p.g * s + u[0] * c) /
          (p.l * den);
  return dx;
}

Vector TwoLinkDynamics(const Vector& x, const Vector& u,
                       const TwoLinkParams& p) {
  const double m = p.mass_ratio();
  const double th1 = x[0];
  const double w1 = x[1];
  const double th2 = x[2];
  const double w2 = x[3];
  const double s12 = std::sin(th1 - th2);
  const double c12 = std::cos(th1 - th2);
  // Shared numerator groups of both angular accelerations.
  const double link1 =
      m * u[0] / (p.M2 * p.L1) - m * p.L2 * w2 * w2 * s12 - p.g * std::cos(th1);
  const double link2 =
      u[1] / (p.M2 * p.L2) + p.L1 * w1 * w1 * s12 - p.g * std::cos(th2);
  const double den = 1.0 - m * c12 * c12;
  Vector dx(4);
  dx << w1, (link1 - m * c12 * link2) / (p.L1 * den), w2,
      (link2 - c12 * link1) / (p.L2 * den);
  return dx;
}

Vector QuadcopterDynamics(const Vector& x, const Vector& u,
                          const QuadcopterParams& p) {
  const double phi = x[kRoll];
  const double theta = x[kPitch];
  const double psi = x[kYaw];
  const double wp = x[kRollRate];
  const double wt = x[kPitchRate];
  const double wy = x[kYawRate];
  const double thrust = x[kThrust] / p.mass;
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double cth = std::cos(theta), sth = std::sin(theta);
  const double cpsi = std::cos(psi), spsi = std::sin(psi);

  Vector dx(kQuadStateDim);
  dx[kRoll] = wp;
  dx[kRollRate] = p.a1() * wt * wy + p.b1() * x[kTorqueRoll];
  dx[kPitch] = wt;
  dx[kPitchRate] = p.a2() * wp * wy + p.b2() * x[kTorquePitch];
  dx[kYaw] = wy;
  dx[kYawRate] = p.a3() * wp * wt + p.b3() * x[kTorqueYaw];
  dx[kPosX] = x[kVelX];
  dx[kVelX] = thrust * (cphi * sth * cpsi + sphi * spsi);
  dx[kPosY] = x[kVelY];
  dx[kVelY] = thrust * (cphi * sth * spsi - sphi * cpsi);
  dx[kPosZ] = x[kVelZ];
  dx[kVelZ] = thrust * cphi * cth - p.g;
  dx[kThrust] = u[0];
  dx[kTorqueRoll] = u[1];
  dx[kTorquePitch] = u[2];
  dx[kTorqueYaw] = u[3];
  return dx;
}

ContinuousDynamics RayleighModel(const RayleighParams& p) {
  return {2, 1, [p](const Vector& x, const Vector& u) {
            return RayleighDynamics(x, u, p);
          }};
}

ContinuousDynamics CartPoleModel(const CartPoleParams& p) {
  return {4, 1, [p](const Vector& x, const Vector& u) {
            return CartPoleDynamics(x, u, p);
          }};
}

ContinuousDynamics TwoLinkModel(const TwoLinkParams& p) {
  return {4, 2, [p](const Vector& x, const Vector& u) {
            return TwoLinkDynamics(x, u, p);
          }};
}

ContinuousDynamics QuadcopterModel(const QuadcopterParams& p) {
  return {kQuadStateDim, 4, [p](const Vector& x, const Vector& u) {
            return QuadcopterDynamics(x, u, p);
          }};
}

namespace {

Vector Vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double value : values) v[i++] = value;
  return v;
}

}  // namespace

const std::vector<std::string>& ScenarioNames() {
  static const std::vector<std::string> names = {
      "rayleigh", "cartpole", "cartpole_soft", "twolink", "quadcopter"};
  return names;
}

ScenarioDefaults DefaultScenario(std::string_view name) {
  using std::numbers::pi;
  ScenarioDefaults s;
  s.name = std::string(name);
  if (name == "rayleigh") {
    s.description = "Rayleigh oscillator driven from (-5, -5) to rest";
    s.dt = 0.01;
    s.duration = 10.0;
    s.x0 = Vec({-5.0, -5.0});
    s.x_ref = Vec({0.0, 0.0});
    s.u_ref = Vec({0.0});
    s.weights = {{1.0, 0.0}, {1.0}};
    s.iteration_presets = {1, 3};
  } else if (name == "cartpole" || name == "cartpole_soft") {
    const bool soft = name == "cartpole_soft";
    s.description = soft ? "Cart-pole 10 m shift with a softened force (R = 0)"
                         : "Cart-pole shifted 10 m with the pendulum upright";
    // The published cart-pole gains correspond to a 0.1 s step.
    s.dt = 0.1;
    // The softened case settles much more slowly.
    s.duration = soft ? 20.0 : 10.0;
    s.x0 = Vector::Zero(4);
    s.x_ref = Vec({10.0, 0.0, 0.0, 0.0});
    s.u_ref = Vec({0.0});
    s.weights = soft ? WeightSpec{{1.0, 1.0, 1000.0, 1000.0}, {0.0}}
                     : WeightSpec{{100.0, 1.0, 1.0, 1.0}, {10.0}};
    s.iteration_presets = soft ? std::vector<int>{1} : std::vector<int>{1, 3};
  } else if (name == "twolink") {
    s.description = "Two-link manipulator moved to (pi/4, pi/6)";
    s.dt = 0.01;
    s.duration = 5.0;
    s.x0 = Vector::Zero(4);
    s.x_ref = Vec({pi / 4.0, 0.0, pi / 6.0, 0.0});
    s.u_ref = Vec({0.0, 0.0});
    s.weights = {{1e5, 0.0, 1e5, 0.0}, {1.0, 1.0}};
    s.iteration_presets = {1, 3};
  } else if (name == "quadcopter") {
    s.description = "Quadcopter returned to hover at the origin";
    s.dt = 0.01;
    s.duration = 10.0;
    s.x0 = Vec({0.3, 1.0, -0.4, 1.0, 0.2, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, -1.0,
                0.0, 0.0, 0.0, 0.0});
    s.x_ref = Vector::Zero(kQuadStateDim);
    s.u_ref = Vector::Zero(4);
    s.weights = {{10, 1, 10, 1, 10, 1, 10, 1, 10, 1, 50, 5, 0, 0, 0, 0},
                 {0.5, 0.5, 0.5, 0.5}};
    s.iteration_presets = {5};
  } else {
    throw Error(ErrorCode::kConfig,
                "unknown scenario '" + std::string(name) + "'");
  }
  return s;
}

ContinuousDynamics ModelFor(std::string_view name) {
  if (name == "rayleigh") return RayleighModel();
  if (name == "cartpole" || name == "cartpole_soft") return CartPoleModel();
  if (name == "twolink") return TwoLinkModel();
  if (name == "quadcopter") return QuadcopterModel();
  throw Error(ErrorCode::kConfig, "unknown system '" + std::string(name) + "'");
}

}  // namespace ilqt
