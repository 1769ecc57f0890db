#include <doctest.h>

#include <random>

#include "ilqt/error.hpp"
#include "ilqt/problem.hpp"

using namespace ilqt;

namespace {

TrackingProblem Scalar(double q, double r, double x_ref, double x0) {
  return TrackingProblem::Constant({{q}, {r}}, Vector::Constant(1, x_ref),
                                   Vector::Zero(1), Vector::Constant(1, x0), 1,
                                   0.1);
}

Trajectory ScalarTraj(double x0, double x1, double u0) {
  Trajectory t;
  t.x = {Vector::Constant(1, x0), Vector::Constant(1, x1)};
  t.u = {Vector::Constant(1, u0)};
  return t;
}

bool HasField(const std::vector<Violation>& v, const std::string& field) {
  for (const auto& e : v) {
    if (e.field == field) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("constant problem passes validation") {
  auto p = TrackingProblem::Constant({{1, 0}, {1}}, Vector::Zero(2),
                                     Vector::Zero(1), Vector::Constant(2, -5),
                                     1000, 0.01);
  CHECK(Validate(p).empty());
  CHECK(p.Q.size() == 1000);
  CHECK(p.R[0](0, 0) == 1.0);
}

TEST_CASE("validation reports negative weights and bad dt") {
  auto p = Scalar(-1.0, 1.0, 0.0, 0.0);
  p.dt = 0.0;
  const auto v = Validate(p);
  CHECK(HasField(v, "Q"));
  CHECK(HasField(v, "dt"));
  CHECK_FALSE(Describe(v).empty());
}

TEST_CASE("validation reports asymmetric weights and wrong lengths") {
  auto p = TrackingProblem::Constant({{1, 1}, {1}}, Vector::Zero(2),
                                     Vector::Zero(1), Vector::Zero(2), 3, 0.1);
  p.Q[1](0, 1) = 0.5;
  p.x_ref.pop_back();
  const auto v = Validate(p);
  CHECK(HasField(v, "Q"));
  CHECK(HasField(v, "x_ref"));
}

TEST_CASE("zero control weight is accepted") {
  auto p = Scalar(1.0, 0.0, 0.0, 0.0);
  CHECK(Validate(p).empty());
}

TEST_CASE("tracking cost by hand") {
  CHECK(TrackingCost(ScalarTraj(1, 0.5, -0.5), Scalar(1, 1, 0, 1)) ==
        doctest::Approx(0.5));
  CHECK(TrackingCost(ScalarTraj(0, 1, 1), Scalar(1, 1, 2, 0)) ==
        doctest::Approx(2.0));
}

TEST_CASE("tracking cost rejects mismatched trajectories") {
  auto t = ScalarTraj(0, 1, 1);
  t.x.push_back(Vector::Zero(1));
  CHECK_THROWS_AS(TrackingCost(t, Scalar(1, 1, 0, 0)), Error);
}

TEST_CASE("cost properties on random problems") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::uniform_real_distribution<double> W(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3, m = 2, N = 4;
    WeightSpec w{{W(rng), W(rng), W(rng)}, {W(rng), W(rng)}};
    Vector xr(n), ur(m), x0(n);
    for (int i = 0; i < n; ++i) xr(i) = U(rng), x0(i) = U(rng);
    for (int i = 0; i < m; ++i) ur(i) = U(rng);
    auto p = TrackingProblem::Constant(w, xr, ur, x0, N, 0.1);
    Trajectory t = Trajectory::Zero(n, m, N);
    for (auto& x : t.x) x = Vector::NullaryExpr(n, [&] { return U(rng); });
    for (auto& u : t.u) u = Vector::NullaryExpr(m, [&] { return U(rng); });
    const double J = TrackingCost(t, p);
    CHECK(J >= 0.0);

    // Scaling every weight scales the cost.
    auto scaled = p;
    for (auto& Q : scaled.Q) Q *= 3.5;
    for (auto& R : scaled.R) R *= 3.5;
    CHECK(TrackingCost(t, scaled) == doctest::Approx(3.5 * J).epsilon(1e-12));

    // Permuting state coordinates with the weights and targets.
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
    perm.indices() << 2, 0, 1;
    auto pp = p;
    Trajectory tp = t;
    for (int k = 0; k < N; ++k) {
      pp.Q[k] = perm * p.Q[k] * perm.transpose();
      pp.x_ref[k] = perm * p.x_ref[k];
    }
    pp.x0 = perm * p.x0;
    for (auto& x : tp.x) x = perm * x;
    CHECK(TrackingCost(tp, pp) == doctest::Approx(J).epsilon(1e-12));
  }
}

TEST_CASE("cost vanishes when deviations lie in the weight null space") {
  auto p = TrackingProblem::Constant({{1, 0}, {0}}, Vector::Zero(2),
                                     Vector::Zero(1), Vector::Zero(2), 2, 0.1);
  Trajectory t = Trajectory::Zero(2, 1, 2);
  t.x[1] << 0, 4;
  t.u[0] << 3;
  CHECK(TrackingCost(t, p) == 0.0);
  t.x[2] << 1e-3, 0;
  CHECK(TrackingCost(t, p) > 0.0);
}
