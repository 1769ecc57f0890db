// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Every tolerance is pinned below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ilqt/ilqr.hpp"
#include "ilqt/linearize.hpp"
#include "ilqt/models.hpp"
#include "ilqt/oracle.hpp"
#include "ilqt/scenario.hpp"

using namespace ilqt;

namespace {

// AC1
constexpr int kOracleCases = 200;
constexpr std::uint64_t kOracleSeed = 20240601;
constexpr double kOracleSeconds = 5.0;
// AC2
constexpr double kRayleighTol = 0.05;
constexpr double kRayleighFeedforwardTol = 1e-6;
constexpr double kRayleighFineDt = 0.0025;
constexpr double kRayleighLimitTol = 0.02;
// AC3
constexpr double kCartPoleTol = 0.05;
// AC4
constexpr double kTwoLinkTol = 0.10;
// AC5
constexpr double kSettledTol = 0.01;
constexpr double kSingleIterationMinError = 0.02;
// Samples before the end at which the settled angle is read.
constexpr int kSettleOffset = 10;
// AC6
constexpr double kHoverPosition = 0.1;
constexpr double kHoverSpeed = 0.05;
constexpr double kHoverAngle = 0.05;
constexpr double kHoverRate = 0.05;
constexpr double kQuadSeconds = 30.0;
// AC7
constexpr int kJacobianStates = 100;
constexpr double kJacobianTol = 1e-6;
constexpr double kJacobianEps = 1e-5;
// AC8
constexpr double kScaleTol = 1e-10;
// AC9
constexpr int kFixedPointTrials = 20;
constexpr double kFixedPointTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

std::string Fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool WithinRel(double got, double want, double tol) {
  return std::abs(got - want) <= tol * std::abs(want);
}

// Relative error in the worst entry.
double WorstRel(const Matrix& got, const Matrix& want) {
  double out = 0.0;
  for (Eigen::Index i = 0; i < want.size(); ++i) {
    out = std::max(out, std::abs(got(i) - want(i)) / std::abs(want(i)));
  }
  return out;
}

Matrix Row(std::initializer_list<double> v) {
  Matrix m(1, static_cast<int>(v.size()));
  int i = 0;
  for (double e : v) m(0, i++) = e;
  return m;
}

IlqrSolution Solve(const ScenarioConfig& cfg, int iterations) {
  IlqrOptions opts;
  opts.max_iterations = iterations;
  opts.update_mode = cfg.update_mode;
  opts.reg = cfg.reg;
  return SolveIlqr(BuildProblem(cfg),
                   DiscretizeEuler(ModelFor(cfg.system), cfg.dt), opts);
}

SteadyGain SingleIterationGain(const ScenarioConfig& cfg) {
  return SteadyGainOf(Solve(cfg, 1).policies.back());
}

Outcome OracleEquivalence() {
  const auto start = std::chrono::steady_clock::now();
  const VerifySummary s = VerifyAgainstOracle(kOracleSeed, kOracleCases);
  const double elapsed = Seconds(start);
  Outcome o;
  o.pass = s.passed && s.cases == kOracleCases &&
           s.max_control_deviation <= 1e-8 &&
           s.max_cost_deviation <= 1e-10 && elapsed < kOracleSeconds;
  o.detail = "cases=" + std::to_string(s.cases) +
             Fmt(" control_dev=%.2e", s.max_control_deviation) +
             Fmt(" cost_dev=%.2e", s.max_cost_deviation) +
             Fmt(" time=%.2fs", elapsed);
  return o;
}

Outcome RayleighGains() {
  Outcome o;
  ScenarioConfig cfg = DefaultConfig("rayleigh");
  const SteadyGain g = SingleIterationGain(cfg);
  const Matrix want = Row({0.7591, 1.064});
  const double rel = WorstRel(g.F, want);
  const double cabs = g.c.cwiseAbs().maxCoeff();

  // The continuous limit of the origin linearization.
  Matrix A(2, 2), B(2, 1);
  A << 0, 1, -1, 1.4;
  B << 0, 4;
  Matrix Q = Matrix::Zero(2, 2);
  Q(0, 0) = 1;
  const Matrix K = ContinuousLqrGain(A, B, Q, Matrix::Identity(1, 1));
  cfg.dt = kRayleighFineDt;
  const SteadyGain fine = SingleIterationGain(cfg);
  const double limit_rel = WorstRel(fine.F, K);

  o.pass = rel <= kRayleighTol && cabs <= kRayleighFeedforwardTol &&
           limit_rel <= kRayleighLimitTol;
  o.detail = Fmt("F=[%.4f, ", g.F(0, 0)) + Fmt("%.4f]", g.F(0, 1)) +
             Fmt(" worst_rel=%.3f", rel) + Fmt(" |c|=%.1e", cabs) +
             Fmt("; dt=0.0025 F=[%.4f, ", fine.F(0, 0)) +
             Fmt("%.4f]", fine.F(0, 1)) + Fmt(" vs limit [%.4f, ", K(0, 0)) +
             Fmt("%.4f]", K(0, 1)) + Fmt(" rel=%.4f", limit_rel);
  return o;
}

Outcome CartPoleGains() {
  Outcome o;
  const SteadyGain g = SingleIterationGain(DefaultConfig("cartpole"));
  const double c_rel = std::abs(g.c(0) + 19.84) / 19.84;
  const double f_rel = WorstRel(g.F, Row({-1.984, -3.595, 49.87, 12.83}));
  const SteadyGain s = SingleIterationGain(DefaultConfig("cartpole_soft"));
  const double sc_rel = std::abs(s.c(0) + 2.889) / 2.889;
  const double sf_rel = WorstRel(s.F, Row({-0.2889, -1.103, 38.36, 12.86}));
  o.pass = c_rel <= kCartPoleTol && f_rel <= kCartPoleTol &&
           sc_rel <= kCartPoleTol && sf_rel <= kCartPoleTol;
  o.detail = Fmt("c=%.3f", g.c(0)) + Fmt(" c_rel=%.3f", c_rel) +
             Fmt(" F_worst_rel=%.3f", f_rel) + Fmt("; soft c=%.4f", s.c(0)) +
             Fmt(" c_rel=%.4f", sc_rel) + Fmt(" F_worst_rel=%.4f", sf_rel);
  return o;
}

Outcome TwoLinkGains() {
  Outcome o;
  const SteadyGain g = SingleIterationGain(DefaultConfig("twolink"));
  Vector c_want(2);
  c_want << 230.3, 152.3;
  Matrix F_want(2, 4);
  F_want << 283.0, 33.64, 15.54, 11.29, 15.53, 11.29, 267.4, 22.35;
  const double c_rel = WorstRel(g.c, c_want);
  const double f_rel = WorstRel(g.F, F_want);
  o.pass = c_rel <= kTwoLinkTol && f_rel <= kTwoLinkTol;
  o.detail = Fmt("c=[%.2f, ", g.c(0)) + Fmt("%.2f]", g.c(1)) +
             Fmt(" c_worst_rel=%.4f", c_rel) + Fmt(" F_worst_rel=%.4f", f_rel);
  return o;
}

Outcome TwoLinkSteadyState() {
  Outcome o;
  const ScenarioConfig cfg = DefaultConfig("twolink");
  const double t1 = cfg.x_ref(0), t2 = cfg.x_ref(2);
  const auto angle_error = [&](const Vector& x) {
    return std::max(std::abs(x(0) - t1), std::abs(x(2) - t2));
  };
  const IlqrSolution three = Solve(cfg, 3);
  const IlqrSolution one = Solve(cfg, 1);
  const int N = three.trajectory.steps();
  const Vector& s3 = three.trajectory.x[N - kSettleOffset];
  const Vector& s1 = one.trajectory.x[N - kSettleOffset];
  const double e3 = angle_error(s3);
  const double e1 = angle_error(s1);
  o.pass = e3 <= kSettledTol && e1 >= kSingleIterationMinError;
  o.detail = Fmt("3 iter settled err=%.4f", e3) +
             Fmt(" (theta=[%.4f, ", s3(0)) + Fmt("%.4f])", s3(2)) +
             Fmt("; 1 iter settled err=%.4f", e1) +
             Fmt("; at T: 3 iter err=%.4f", angle_error(three.trajectory.x[N])) +
             Fmt(" 1 iter err=%.4f", angle_error(one.trajectory.x[N]));
  return o;
}

struct HoverCheck {
  bool ok = false;
  double pos = 0, speed = 0, angle = 0, rate = 0;
};

HoverCheck Hover(const Vector& x) {
  HoverCheck h;
  h.pos = std::max({std::abs(x(kPosX)), std::abs(x(kPosY)), std::abs(x(kPosZ))});
  h.speed = std::max({std::abs(x(kVelX)), std::abs(x(kVelY)), std::abs(x(kVelZ))});
  h.angle = std::max({std::abs(x(kRoll)), std::abs(x(kPitch)), std::abs(x(kYaw))});
  h.rate = std::max({std::abs(x(kRollRate)), std::abs(x(kPitchRate)),
                     std::abs(x(kYawRate))});
  h.ok = h.pos <= kHoverPosition && h.speed <= kHoverSpeed &&
         h.angle <= kHoverAngle && h.rate <= kHoverRate;
  return h;
}

Outcome QuadcopterHover() {
  Outcome o;
  const ScenarioConfig cfg = DefaultConfig("quadcopter");
  const auto start = std::chrono::steady_clock::now();
  const IlqrSolution five = Solve(cfg, 5);
  const double elapsed = Seconds(start);
  const IlqrSolution one = Solve(cfg, 1);
  const HoverCheck h5 = Hover(five.trajectory.x.back());
  const HoverCheck h1 = Hover(one.trajectory.x.back());
  o.pass = h5.ok && !h1.ok && elapsed < kQuadSeconds;
  o.detail = Fmt("5 iter pos=%.1e", h5.pos) + Fmt(" speed=%.1e", h5.speed) +
             Fmt(" angle=%.1e", h5.angle) + Fmt(" rate=%.1e", h5.rate) +
             Fmt(" time=%.2fs", elapsed) +
             std::string("; 1 iter hover=") + (h1.ok ? "yes" : "no") +
             Fmt(" pos=%.2f", h1.pos);
  return o;
}

Outcome JacobianCorrectness() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  const DiscreteDynamics field{2, 1, 1.0,
                               [](int, const Vector& x, const Vector& u) {
                                 return RayleighDynamics(x, u);
                               }};
  double worst = 0.0;
  for (int i = 0; i < kJacobianStates; ++i) {
    Vector x(2), u(1);
    x << U(rng), U(rng);
    u << U(rng);
    const Jacobians J = JacobiansFd(field, 0, x, u, kJacobianEps);
    Matrix A(2, 2), B(2, 1);
    A << 0, 1, -1, 1.4 * (1 - 0.3 * x(1) * x(1));
    B << 0, 4;
    worst = std::max({worst, (J.A - A).cwiseAbs().maxCoeff(),
                      (J.B - B).cwiseAbs().maxCoeff()});
  }
  o.pass = worst <= kJacobianTol;
  o.detail = "states=" + std::to_string(kJacobianStates) +
             Fmt(" max_err=%.2e", worst);
  return o;
}

double PolicyDeviation(const Policy& a, const Policy& b) {
  double out = 0.0;
  for (int k = 0; k < a.steps(); ++k) {
    const double cs = std::max(1.0, a.c[k].cwiseAbs().maxCoeff());
    const double fs = std::max(1.0, a.F[k].cwiseAbs().maxCoeff());
    out = std::max(out, (a.c[k] - b.c[k]).cwiseAbs().maxCoeff() / cs);
    out = std::max(out, (a.F[k] - b.F[k]).cwiseAbs().maxCoeff() / fs);
  }
  return out;
}

Outcome ScaleInvariance() {
  Outcome o;
  double worst = 0.0;
  for (const char* name : {"rayleigh", "cartpole"}) {
    const ScenarioConfig base = DefaultConfig(name);
    const IlqrSolution ref = Solve(base, 1);
    for (double alpha : {0.1, 7.0, 1000.0}) {
      ScenarioConfig scaled = base;
      for (double& q : scaled.weights.q_diag) q *= alpha;
      for (double& r : scaled.weights.r_diag) r *= alpha;
      const IlqrSolution s = Solve(scaled, 1);
      worst = std::max(worst, PolicyDeviation(ref.policies[0], s.policies[0]));
    }
  }
  o.pass = worst <= kScaleTol;
  o.detail = "alphas={0.1,7,1000} scenarios={rayleigh,cartpole}" +
             Fmt(" max_rel_dev=%.2e", worst);
  return o;
}

Outcome LinearFixedPoint() {
  Outcome o;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst_inc = 0.0, worst_cost = 0.0;
  for (int trial = 0; trial < kFixedPointTrials; ++trial) {
    const int n = 2 + trial % 3, m = 1 + trial % 2, N = 40;
    Matrix A = Matrix::NullaryExpr(n, n, [&] { return U(rng); });
    A *= 0.9 / A.eigenvalues().cwiseAbs().maxCoeff();
    const Matrix B = Matrix::NullaryExpr(n, m, [&] { return U(rng); });
    WeightSpec w;
    for (int i = 0; i < n; ++i) w.q_diag.push_back(1 + 4 * (U(rng) + 1));
    for (int i = 0; i < m; ++i) w.r_diag.push_back(0.2 + (U(rng) + 1));
    const Vector xr = Vector::NullaryExpr(n, [&] { return 3 * U(rng); });
    const Vector ur = Vector::NullaryExpr(m, [&] { return U(rng); });
    const Vector x0 = Vector::NullaryExpr(n, [&] { return 3 * U(rng); });
    const auto problem = TrackingProblem::Constant(w, xr, ur, x0, N, 0.1);
    const DiscreteDynamics dyn = LinearDynamics(A, B, 0.1);

    for (auto mode : {UpdateMode::kPaperLinear, UpdateMode::kNonlinearRollout}) {
      IlqrOptions opts;
      opts.max_iterations = 3;
      opts.update_mode = mode;
      if (mode == UpdateMode::kNonlinearRollout) {
        // Closed-loop updates need a nominal that obeys the plant.
        opts.warm_start = Rollout(dyn, x0, std::vector<Vector>(N, Vector::Zero(m)));
      }
      const IlqrSolution sol = SolveIlqr(problem, dyn, opts);
      for (int i = 1; i < sol.iterations_used; ++i) {
        worst_inc = std::max({worst_inc, sol.control_increments[i],
                              sol.state_increments[i]});
        worst_cost = std::max(worst_cost, std::abs(sol.costs[i] - sol.costs[0]) /
                                              std::max(1.0, sol.costs[0]));
      }
    }
  }
  o.pass = worst_inc <= kFixedPointTol && worst_cost <= kFixedPointTol;
  o.detail = "trials=" + std::to_string(kFixedPointTrials) +
             Fmt(" max_late_increment=%.2e", worst_inc) +
             Fmt(" max_cost_change=%.2e", worst_cost);
  return o;
}

Outcome CostImprovement() {
  Outcome o;
  for (const auto& name : ScenarioNames()) {
    const ScenarioConfig cfg = DefaultConfig(name);
    if (cfg.iterations < 2) continue;
    const IlqrSolution sol = Solve(cfg, cfg.iterations);
    const bool ok = sol.costs.back() <= sol.costs.front();
    o.pass = o.pass && ok;
    o.detail += name + Fmt(" %.4g", sol.costs.front()) + "->" +
                Fmt("%.4g", sol.costs.back()) + "; ";
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"AC1", "oracle equivalence", OracleEquivalence},
      {"AC2", "rayleigh gains", RayleighGains},
      {"AC3", "cart-pole gains", CartPoleGains},
      {"AC4", "two-link gains", TwoLinkGains},
      {"AC5", "two-link steady state", TwoLinkSteadyState},
      {"AC6", "quadcopter hover", QuadcopterHover},
      {"AC7", "jacobian correctness", JacobianCorrectness},
      {"AC8", "gain scale invariance", ScaleInvariance},
      {"AC9", "linear-plant fixed point", LinearFixedPoint},
      {"AC10", "first-vs-last cost", CostImprovement},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%-4s %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
