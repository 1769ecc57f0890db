#include "ilqt/problem.hpp"

#include <cmath>
#include <sstream>

#include "ilqt/error.hpp"

namespace ilqt {

namespace {

Matrix Diagonal(const std::vector<double>& diag) {
  Vector d(static_cast<Eigen::Index>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) d[static_cast<Eigen::Index>(i)] = diag[i];
  return d.asDiagonal();
}

// Appends a violation if `W` is not a symmetric PSD matrix of size dim x dim.
void CheckWeight(const Matrix& W, int dim, const std::string& field, int k,
                 std::vector<Violation>& out) {
  if (W.rows() != dim || W.cols() != dim) {
    std::ostringstream msg;
    msg << "expected " << dim << "x" << dim << ", got " << W.rows() << "x"
        << W.cols();
    out.push_back({field, k, msg.str()});
    return;
  }
  if (dim == 0) return;
  if (!W.allFinite()) {
    out.push_back({field, k, "non-finite entry"});
    return;
  }
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    out.push_back({field, k, "not symmetric"});
    return;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(W, Eigen::EigenvaluesOnly);
  const double lowest = eig.eigenvalues().minCoeff();
  if (lowest < -1e-12 * scale) {
    std::ostringstream msg;
    msg << "eigenvalue " << lowest << " < 0";
    out.push_back({field, k, msg.str()});
  }
}

void CheckVectors(const std::vector<Vector>& seq, std::size_t length, int dim,
                  const std::string& field, std::vector<Violation>& out) {
  if (seq.size() != length) {
    std::ostringstream msg;
    msg << "length " << seq.size() << ", expected " << length;
    out.push_back({field, -1, msg.str()});
    return;
  }
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (seq[k].size() != dim) {
      std::ostringstream msg;
      msg << "size " << seq[k].size() << ", expected " << dim;
      out.push_back({field, static_cast<int>(k), msg.str()});
    } else if (!seq[k].allFinite()) {
      out.push_back({field, static_cast<int>(k), "non-finite entry"});
    }
  }
}

}  // namespace

TrackingProblem TrackingProblem::Constant(const WeightSpec& weights,
                                          const Vector& x_ref,
                                          const Vector& u_ref, const Vector& x0,
                                          int steps, double dt) {
  TrackingProblem p;
  p.nx = static_cast<int>(x0.size());
  p.nu = static_cast<int>(u_ref.size());
  p.steps = steps;
  p.dt = dt;
  const int n = std::max(steps, 0);
  p.Q.assign(n, Diagonal(weights.q_diag));
  p.R.assign(n, Diagonal(weights.r_diag));
  p.x_ref.assign(n, x_ref);
  p.u_ref.assign(n, u_ref);
  p.x0 = x0;
  return p;
}

LtvModel LtvModel::Constant(const Matrix& A, const Matrix& B, int steps) {
  return LtvModel{std::vector<Matrix>(steps, A), std::vector<Matrix>(steps, B)};
}

Trajectory Trajectory::Zero(int nx, int nu, int steps) {
  return Trajectory{std::vector<Vector>(steps + 1, Vector::Zero(nx)),
                    std::vector<Vector>(steps, Vector::Zero(nu))};
}

std::vector<Violation> Validate(const TrackingProblem& p) {
  std::vector<Violation> out;
  if (p.nx < 1) out.push_back({"nx", -1, "state dimension must be >= 1"});
  if (p.nu < 1) out.push_back({"nu", -1, "control dimension must be >= 1"});
  if (p.steps < 1) out.push_back({"steps", -1, "must be >= 1"});
  if (!(p.dt > 0.0) || !std::isfinite(p.dt)) {
    out.push_back({"dt", -1, "must be a positive finite number"});
  }
  if (p.steps < 0 || p.nx < 0 || p.nu < 0) return out;

  const auto length = static_cast<std::size_t>(p.steps);
  if (p.Q.size() != length) {
    out.push_back({"Q", -1, "length " + std::to_string(p.Q.size()) +
                                ", expected " + std::to_string(length)});
  } else {
    for (std::size_t k = 0; k < length; ++k) {
      CheckWeight(p.Q[k], p.nx, "Q", static_cast<int>(k), out);
    }
  }
  if (p.R.size() != length) {
    out.push_back({"R", -1, "length " + std::to_string(p.R.size()) +
                                ", expected " + std::to_string(length)});
  } else {
    for (std::size_t k = 0; k < length; ++k) {
      CheckWeight(p.R[k], p.nu, "R", static_cast<int>(k), out);
    }
  }
  CheckVectors(p.x_ref, length, p.nx, "x_ref", out);
  CheckVectors(p.u_ref, length, p.nu, "u_ref", out);
  if (p.x0.size() != p.nx) {
    out.push_back({"x0", -1, "size " + std::to_string(p.x0.size()) +
                                 ", expected " + std::to_string(p.nx)});
  } else if (!p.x0.allFinite()) {
    out.push_back({"x0", -1, "non-finite entry"});
  }
  return out;
}

std::string Describe(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto& v = violations[i];
    if (i) os << "; ";
    os << v.field;
    if (v.index >= 0) os << "[" << v.index << "]";
    os << ": " << v.message;
  }
  return os.str();
}

double TrackingCost(const Trajectory& traj, const TrackingProblem& p) {
  if (traj.steps() != p.steps || traj.x.size() != traj.u.size() + 1) {
    throw DimensionError("trajectory length does not match problem horizon");
  }
  double cost = 0.0;
  for (int k = 0; k < p.steps; ++k) {
    const Vector& x = traj.x[k + 1];
    const Vector& u = traj.u[k];
    if (x.size() != p.nx || u.size() != p.nu) {
      throw DimensionError("trajectory entry size mismatch at step " +
                           std::to_string(k));
    }
    const Vector dx = p.x_ref[k] - x;
    const Vector du = p.u_ref[k] - u;
    cost += dx.dot(p.Q[k] * dx) + du.dot(p.R[k] * du);
  }
  return cost;
}

void CheckModel(const LtvModel& model, const TrackingProblem& p) {
  if (model.A.size() != static_cast<std::size_t>(p.steps) ||
      model.B.size() != static_cast<std::size_t>(p.steps)) {
    throw DimensionError("model has " + std::to_string(model.A.size()) +
                         " steps, problem has " + std::to_string(p.steps));
  }
  for (int k = 0; k < p.steps; ++k) {
    if (model.A[k].rows() != p.nx || model.A[k].cols() != p.nx ||
        model.B[k].rows() != p.nx || model.B[k].cols() != p.nu) {
      throw DimensionError("model matrix shape mismatch at step " +
                           std::to_string(k));
    }
  }
}

}  // namespace ilqt
