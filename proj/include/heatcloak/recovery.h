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

// Box-constrained Basis Pursuit Denoising:
//
//   minimise ||f||_1  subject to  ||M f - y||_2 <= r,  0 <= f <= 1.
//
// On the box ||f||_1 = sum(f), so the problem is a linear objective over the
// intersection of a box and an ellipsoidal cylinder. It is solved by ADMM on
// the splitting f = x (box), M f = z (ball), where both projections are
// closed form and the f-update is a solve with the fixed matrix I + M^T M.

#ifndef HEATCLOAK_RECOVERY_H_
#define HEATCLOAK_RECOVERY_H_

#include <optional>

#include "Eigen/Core"
#include "absl/status/statusor.h"

namespace heatcloak {

struct SolverTolerances {
  // Accepted constraint violation is feasibility * (1 + radius).
  double feasibility = 1e-6;
  // Relative change of the objective over `window` iterations.
  double optimality = 1e-6;
  int window = 50;
  int max_iterations = 50000;
};

struct RecoveryProblem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd measurements;
  double radius = 0.0;

  static absl::StatusOr<RecoveryProblem> Create(Eigen::MatrixXd matrix,
                                                Eigen::VectorXd measurements,
                                                double radius);
};

struct RecoveryResult {
  Eigen::VectorXd estimate;
  double objective = 0.0;             // ||f||_1
  double residual_norm = 0.0;         // ||M f - y||_2
  double constraint_violation = 0.0;  // max(0, residual - radius)
  int iterations = 0;
  bool converged = false;
  // ||f||_1 == 0; normalised-EMD scores are undefined for this estimate.
  bool degenerate = false;
};

// (1 + rho) * sigma * sqrt(m).
double FeasibilityRadius(double sigma, int m, double rho = 0.0);

// Errors: "Infeasible" when the distance from y to M([0,1]^n) provably
// exceeds the radius. Running out of iterations is not an error: the best
// iterate is returned with converged = false.
absl::StatusOr<RecoveryResult> BpdSolve(
    const RecoveryProblem& problem, const SolverTolerances& tol = {},
    const std::optional<Eigen::VectorXd>& warm_start = std::nullopt);

// Distance bounds from y to the image of the box, from projected
// accelerated gradient on 0.5 ||M f - y||^2. The search stops early once a
// point within `target` is found or the lower bound exceeds `target`.
struct BoxResidual {
  Eigen::VectorXd point;
  double upper = 0.0;  // ||M point - y||
  double lower = 0.0;  // certified lower bound on the distance
  int iterations = 0;
};
BoxResidual MinimizeBoxResidual(const Eigen::MatrixXd& m,
                                const Eigen::VectorXd& y, double target,
                                int max_iterations);

}  // namespace heatcloak

#endif  // HEATCLOAK_RECOVERY_H_
