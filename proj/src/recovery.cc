//
// Copyright 2026 The Heatcloak Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "heatcloak/recovery.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

#include "Eigen/Cholesky"
#include "Eigen/Eigenvalues"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace heatcloak {
namespace {

constexpr double kAbsTolerance = 1e-10;
constexpr double kRelTolerance = 1e-7;
constexpr int kRhoUpdateInterval = 20;
constexpr double kRhoBalance = 10.0;
constexpr double kRhoFactor = 2.0;
constexpr int kCertificateInterval = 10;

Eigen::VectorXd ClipToBox(const Eigen::VectorXd& v) {
  return v.cwiseMax(0.0).cwiseMin(1.0);
}

Eigen::VectorXd ProjectToBall(const Eigen::VectorXd& v,
                              const Eigen::VectorXd& center, double radius) {
  const Eigen::VectorXd offset = v - center;
  const double norm = offset.norm();
  if (norm <= radius) return v;
  return center + offset * (radius / norm);
}

double SpectralNormSquared(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd gram = m.cols() <= m.rows()
                                   ? Eigen::MatrixXd(m.transpose() * m)
                                   : Eigen::MatrixXd(m * m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      gram, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

// Smallest residual on the segment from `from` to `to` that still meets the
// radius: bisection on the blend weight, which is valid because the residual
// norm is convex along the segment.
Eigen::VectorXd BlendIntoBall(const Eigen::MatrixXd& m,
                              const Eigen::VectorXd& y, double radius,
                              const Eigen::VectorXd& from,
                              const Eigen::VectorXd& to) {
  double lo = 0.0;
  double hi = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    const Eigen::VectorXd trial = (1.0 - mid) * from + mid * to;
    if ((m * trial - y).norm() <= radius) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return ClipToBox((1.0 - hi) * from + hi * to);
}

}  // namespace

double FeasibilityRadius(double sigma, int m, double rho) {
  return (1.0 + rho) * sigma * std::sqrt(static_cast<double>(m));
}

absl::StatusOr<RecoveryProblem> RecoveryProblem::Create(
    Eigen::MatrixXd matrix, Eigen::VectorXd measurements, double radius) {
  if (matrix.rows() != measurements.size() || matrix.cols() < 1) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "DimensionMismatch: operator is %dx%d, measurements have %d entries",
        matrix.rows(), matrix.cols(), measurements.size()));
  }
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("radius %g must be finite and >= 0", radius));
  }
  if (!matrix.allFinite() || !measurements.allFinite()) {
    return absl::InvalidArgumentError("operator and measurements must be finite");
  }
  return RecoveryProblem{std::move(matrix), std::move(measurements), radius};
}

BoxResidual MinimizeBoxResidual(const Eigen::MatrixXd& m,
                                const Eigen::VectorXd& y, double target,
                                int max_iterations) {
  const Eigen::Index n = m.cols();
  BoxResidual out;
  out.point = Eigen::VectorXd::Zero(n);
  const double lipschitz = SpectralNormSquared(m);
  if (!(lipschitz > 0.0)) {
    out.upper = out.lower = y.norm();
    return out;
  }
  const double step = 1.0 / lipschitz;
  Eigen::VectorXd x = out.point;
  Eigen::VectorXd v = x;
  double t = 1.0;
  double value = 0.5 * (m * x - y).squaredNorm();
  out.upper = std::sqrt(2.0 * value);
  for (int iter = 1; iter <= max_iterations; ++iter) {
    const Eigen::VectorXd grad = m.transpose() * (m * v - y);
    const Eigen::VectorXd next = ClipToBox(v - step * grad);
    const double next_value = 0.5 * (m * next - y).squaredNorm();
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (next_value > value) {
      // Adaptive restart.
      v = x;
      t = 1.0;
      continue;
    }
    v = next + ((t - 1.0) / t_next) * (next - x);
    x = next;
    t = t_next;
    value = next_value;
    out.iterations = iter;
    if (iter % kCertificateInterval != 0 && iter != max_iterations) continue;

    const Eigen::VectorXd residual = m * x - y;
    const double upper = residual.norm();
    const Eigen::VectorXd g = m.transpose() * residual;
    // Frank-Wolfe gap over the box bounds the suboptimality of x.
    const double fw_gap = g.dot(x) - g.cwiseMin(0.0).sum();
    const double lower_sq = upper * upper - 2.0 * std::max(0.0, fw_gap);
    out.point = x;
    out.upper = upper;
    out.lower = std::sqrt(std::max(0.0, lower_sq));
    if (upper <= target || out.lower > target) break;
    if (fw_gap <= 1e-15 * std::max(1.0, value)) break;
  }
  if (out.iterations == 0) {
    out.upper = (m * x - y).norm();
    out.lower = 0.0;
  }
  return out;
}

absl::StatusOr<RecoveryResult> BpdSolve(
    const RecoveryProblem& problem, const SolverTolerances& tol,
    const std::optional<Eigen::VectorXd>& warm_start) {
  const Eigen::MatrixXd& m = problem.matrix;
  const Eigen::VectorXd& y = problem.measurements;
  const double radius = problem.radius;
  const Eigen::Index n = m.cols();
  const Eigen::Index rows = m.rows();
  const double feas_tol = tol.feasibility * (1.0 + radius);

  RecoveryResult result;
  if (y.norm() <= radius) {
    // Zero is feasible and has the smallest possible l1 norm.
    result.estimate = Eigen::VectorXd::Zero(n);
    result.residual_norm = y.norm();
    result.converged = true;
    result.degenerate = true;
    return result;
  }

  // A strictly feasible point, used to start ADMM and to repair the final
  // iterate if it sits just outside the ball.
  const double target = radius > 0.0 ? radius - 0.5 * std::min(feas_tol, radius)
                                     : 0.5 * feas_tol;
  BoxResidual feasible =
      MinimizeBoxResidual(m, y, target, tol.max_iterations);
  if (feasible.lower > radius + feas_tol) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "Infeasible: distance from measurements to the image of the box is at "
        "least %.9g > radius %.9g",
        feasible.lower, radius));
  }
  const bool have_feasible = feasible.upper <= radius + feas_tol;

  Eigen::LLT<Eigen::MatrixXd> kkt(Eigen::MatrixXd::Identity(n, n) +
                                  m.transpose() * m);
  if (kkt.info() != Eigen::Success) {
    return absl::InternalError("SolverFailure: factorisation of I + M^T M failed");
  }

  Eigen::VectorXd x =
      warm_start.has_value() && warm_start->size() == n
          ? ClipToBox(*warm_start)
          : feasible.point;
  Eigen::VectorXd f = x;
  Eigen::VectorXd z = ProjectToBall(m * x, y, radius);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(rows);
  double rho = 1.0;
  std::deque<double> history;

  int iter = 0;
  bool converged = false;
  for (iter = 1; iter <= tol.max_iterations; ++iter) {
    f = kkt.solve(x - u + m.transpose() * (z - w));
    const Eigen::VectorXd mf = m * f;
    const Eigen::VectorXd x_old = x;
    const Eigen::VectorXd z_old = z;
    x = ClipToBox(f + u - Eigen::VectorXd::Constant(n, 1.0 / rho));
    z = ProjectToBall(mf + w, y, radius);
    u += f - x;
    w += mf - z;

    const double objective = x.sum();
    history.push_back(objective);
    if (static_cast<int>(history.size()) > tol.window + 1) history.pop_front();

    const double primal =
        std::sqrt((f - x).squaredNorm() + (mf - z).squaredNorm());
    const double dual =
        rho * ((x - x_old) + m.transpose() * (z - z_old)).norm();
    const double eps_primal =
        kAbsTolerance * std::sqrt(static_cast<double>(n + rows)) +
        kRelTolerance * std::max(std::sqrt(f.squaredNorm() + mf.squaredNorm()),
                                 std::sqrt(x.squaredNorm() + z.squaredNorm()));
    const double eps_dual =
        kAbsTolerance * std::sqrt(static_cast<double>(n)) +
        kRelTolerance * rho * (u + m.transpose() * w).norm();

    if (primal <= eps_primal && dual <= eps_dual &&
        static_cast<int>(history.size()) > tol.window) {
      const double change = std::abs(history.back() - history.front());
      const double violation = (m * x - y).norm() - radius;
      if (change <= tol.optimality * std::max(1.0, std::abs(objective)) &&
          violation <= feas_tol) {
        converged = true;
        break;
      }
    }

    if (iter % kRhoUpdateInterval == 0) {
      double scale = 1.0;
      if (primal > kRhoBalance * dual) {
        scale = kRhoFactor;
      } else if (dual > kRhoBalance * primal) {
        scale = 1.0 / kRhoFactor;
      }
      if (scale != 1.0) {
        rho *= scale;
        u /= scale;
        w /= scale;
      }
    }
  }

  double residual = (m * x - y).norm();
  if (residual > radius + feas_tol && have_feasible) {
    x = BlendIntoBall(m, y, radius + 0.5 * feas_tol, x, feasible.point);
    residual = (m * x - y).norm();
  }

  result.estimate = x;
  result.objective = x.sum();
  result.residual_norm = residual;
  result.constraint_violation = std::max(0.0, residual - radius);
  result.iterations = std::min(iter, tol.max_iterations);
  result.converged = converged && result.constraint_violation <= feas_tol;
  result.degenerate = result.objective == 0.0;
  return result;
}

}  // namespace heatcloak
