#include "ilqt/oracle.hpp"

#include <complex>
#include <string>
#include <vector>

#include "ilqt/error.hpp"

namespace ilqt {

BatchSolution SolveBatch(const LtvModel& model, const TrackingProblem& p,
                         const RegularizationSetting& reg) {
  CheckModel(model, p);
  const int N = p.steps;
  const int n = p.nx;
  const int m = p.nu;
  if (N * m > kBatchMaxUnknowns) {
    throw Error(ErrorCode::kInvalidArgument,
                "batch oracle limited to " + std::to_string(kBatchMaxUnknowns) +
                    " stacked controls, got " + std::to_string(N * m));
  }

  // Stacked states X = [x_1; ...; x_N] = free + G * U.
  Matrix G = Matrix::Zero(N * n, N * m);
  Vector free(N * n);
  Vector x_prev = p.x0;
  for (int k = 0; k < N; ++k) {
    const Matrix& A = model.A[k];
    free.segment(k * n, n) = A * x_prev;
    x_prev = free.segment(k * n, n);
    if (k > 0) {
      G.block(k * n, 0, n, k * m) = A * G.block((k - 1) * n, 0, n, k * m);
    }
    G.block(k * n, k * m, n, m) = model.B[k];
  }

  Matrix Qbar = Matrix::Zero(N * n, N * n);
  Matrix Rbar = Matrix::Zero(N * m, N * m);
  Vector x_ref(N * n);
  Vector u_ref(N * m);
  for (int k = 0; k < N; ++k) {
    Qbar.block(k * n, k * n, n, n) = p.Q[k];
    Rbar.block(k * m, k * m, m, m) = p.R[k];
    x_ref.segment(k * n, n) = p.x_ref[k];
    u_ref.segment(k * m, m) = p.u_ref[k];
  }

  Matrix H = G.transpose() * Qbar * G + Rbar;
  H = 0.5 * (H + H.transpose());
  const Vector g = G.transpose() * Qbar * (x_ref - free) + Rbar * u_ref;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(H, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double rcond = hi > 0 ? std::max(eig.eigenvalues().minCoeff(), 0.0) / hi
                              : 0.0;
  if (reg.mode == RegularizationMode::kAlways ||
      rcond < reg.condition_threshold) {
    H.diagonal().array() += reg.lambda;
  }
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingular, "batch normal equations are singular");
  }

  BatchSolution sol;
  sol.u_stacked = llt.solve(g);
  sol.trajectory.x.reserve(N + 1);
  sol.trajectory.x.push_back(p.x0);
  for (int k = 0; k < N; ++k) {
    const Vector u = sol.u_stacked.segment(k * m, m);
    sol.trajectory.u.push_back(u);
    sol.trajectory.x.push_back(model.A[k] * sol.trajectory.x.back() +
                               model.B[k] * u);
  }
  sol.cost = TrackingCost(sol.trajectory, p);
  return sol;
}

Matrix ContinuousLqrGain(const Matrix& A, const Matrix& B, const Matrix& Q,
                         const Matrix& R) {
  const auto n = A.rows();
  const Matrix Rinv = R.inverse();
  Matrix H(2 * n, 2 * n);
  H << A, -B * Rinv * B.transpose(), -Q, -A.transpose();
  Eigen::EigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingular, "Hamiltonian eigendecomposition failed");
  }
  Eigen::MatrixXcd stable(2 * n, n);
  Eigen::Index cols = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    if (es.eigenvalues()[i].real() < 0.0) {
      if (cols == n) break;
      stable.col(cols++) = es.eigenvectors().col(i);
    }
  }
  if (cols != n) {
    throw Error(ErrorCode::kSingular,
                "Hamiltonian has eigenvalues on the imaginary axis");
  }
  const Eigen::MatrixXcd top = stable.topRows(n);
  const Eigen::MatrixXcd bottom = stable.bottomRows(n);
  const Matrix P = (bottom * top.inverse()).real();
  return Rinv * B.transpose() * (0.5 * (P + P.transpose()));
}

RandomCase RandomSmallCase(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nx_dist(1, 3);
  std::uniform_int_distribution<int> nu_dist(1, 2);
  std::uniform_int_distribution<int> steps_dist(1, 6);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> weight(0.1, 10.0);

  const int n = nx_dist(rng);
  const int m = nu_dist(rng);
  const int N = steps_dist(rng);
  auto random_matrix = [&](int rows, int cols) {
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) M(i, j) = entry(rng);
    return M;
  };
  auto random_vector = [&](int size) {
    Vector v(size);
    for (int i = 0; i < size; ++i) v[i] = 3.0 * entry(rng);
    return v;
  };

  RandomCase rc;
  rc.problem.nx = n;
  rc.problem.nu = m;
  rc.problem.steps = N;
  rc.problem.dt = 0.1;
  rc.problem.x0 = random_vector(n);
  for (int k = 0; k < N; ++k) {
    rc.model.A.push_back(Matrix::Identity(n, n) + 0.5 * random_matrix(n, n));
    rc.model.B.push_back(random_matrix(n, m));
    Vector q(n), r(m);
    for (int i = 0; i < n; ++i) q[i] = weight(rng);
    for (int i = 0; i < m; ++i) r[i] = weight(rng);
    rc.problem.Q.push_back(q.asDiagonal());
    rc.problem.R.push_back(r.asDiagonal());
    rc.problem.x_ref.push_back(random_vector(n));
    rc.problem.u_ref.push_back(random_vector(m));
  }
  return rc;
}

}  // namespace ilqt
