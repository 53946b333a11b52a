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

#include <cmath>
#include <vector>

#include "Eigen/Core"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "heatcloak/diffusion.h"
#include "heatcloak/privacy.h"
#include "status_matchers.h"

namespace heatcloak {
namespace {

using ::heatcloak::testing::StatusIs;
using ::testing::DoubleNear;

Eigen::VectorXd Vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
}

TEST(FeasibilityRadiusTest, Formula) {
  EXPECT_DOUBLE_EQ(FeasibilityRadius(0.1, 50), 0.1 * std::sqrt(50.0));
  EXPECT_DOUBLE_EQ(FeasibilityRadius(0.1, 50, 0.3), 1.3 * 0.1 * std::sqrt(50.0));
}

TEST(RecoveryProblemTest, Validates) {
  EXPECT_THAT(RecoveryProblem::Create(Eigen::MatrixXd::Ones(3, 4),
                                      Eigen::VectorXd::Ones(2), 0.1),
              StatusIs(absl::StatusCode::kInvalidArgument, "DimensionMismatch"));
  EXPECT_FALSE(RecoveryProblem::Create(Eigen::MatrixXd::Ones(3, 4),
                                       Eigen::VectorXd::Ones(3), -1)
                   .ok());
}

// cvxpy + Clarabel at 1e-12 tolerances; tests/oracles/make_fixtures.py.
TEST(BpdSolveTest, MatchesCvxpy) {
  const Eigen::VectorXd y =
      Vec({0.598028587504284, 0.72726329838928672, 0.79346423658956999,
           0.82550737544842923, 0.86932851881779938, 0.82045463963646981,
           0.81017830948755287, 0.77933678379158988, 0.57335675390884333,
           0.44646266654255956});
  const double radius = 0.158113883008419;
  absl::StatusOr<RecoveryProblem> problem =
      RecoveryProblem::Create(HeatKernelMatrix(20, 10, 0.5, 0.2)->matrix, y, radius);
  HC_ASSERT_OK(problem);
  absl::StatusOr<RecoveryResult> r = BpdSolve(*problem);
  HC_ASSERT_OK(r);
  EXPECT_TRUE(r->converged);
  EXPECT_FALSE(r->degenerate);
  EXPECT_THAT(r->objective, DoubleNear(0.93376299014438935, 1e-5));
  EXPECT_LE(r->constraint_violation, 1e-6);
  EXPECT_THAT(r->estimate(9), DoubleNear(0.89861157654366963, 1e-3));
  EXPECT_THAT(r->estimate(10), DoubleNear(0.035151413590827851, 1e-3));
  EXPECT_GE(r->estimate.minCoeff(), 0.0);
  EXPECT_LE(r->estimate.maxCoeff(), 1.0);
  EXPECT_DOUBLE_EQ(r->objective, r->estimate.lpNorm<1>());
}

TEST(BpdSolveTest, SmallMeasurementsGiveZero) {
  absl::StatusOr<RecoveryProblem> problem = RecoveryProblem::Create(
      HeatKernelMatrix(20, 10, 0.5, 0.2)->matrix, Eigen::VectorXd::Constant(10, 0.01),
      1.0);
  absl::StatusOr<RecoveryResult> r = BpdSolve(*problem);
  HC_ASSERT_OK(r);
  EXPECT_TRUE(r->degenerate);
  EXPECT_EQ(r->estimate, Eigen::VectorXd::Zero(20));
}

TEST(BpdSolveTest, ReportsInfeasibleBall) {
  // Negative measurements are far from the image of the nonnegative box.
  absl::StatusOr<RecoveryProblem> problem = RecoveryProblem::Create(
      HeatKernelMatrix(20, 10, 0.5, 0.2)->matrix, Eigen::VectorXd::Constant(10, -1.0),
      0.5);
  EXPECT_THAT(BpdSolve(*problem),
              StatusIs(absl::StatusCode::kFailedPrecondition, "Infeasible"));
}

TEST(BpdSolveTest, NoiselessSingleSourceIsRecovered) {
  const DiffusionOperator op = *HeatKernelMatrix(50, 30, 0.5, 0.05);
  Eigen::VectorXd f0 = Eigen::VectorXd::Zero(50);
  f0(20) = 1.0;
  absl::StatusOr<RecoveryProblem> problem =
      RecoveryProblem::Create(op.matrix, op.matrix * f0, 1e-6);
  absl::StatusOr<RecoveryResult> r = BpdSolve(*problem);
  HC_ASSERT_OK(r);
  EXPECT_LE((r->estimate - f0).norm(), 1e-3);
}

TEST(BpdSolveTest, WarmStartGivesSameAnswer) {
  const DiffusionOperator op = *HeatKernelMatrix(30, 15, 0.5, 0.25);
  Eigen::VectorXd f0 = Eigen::VectorXd::Zero(30);
  f0(14) = 1.0;
  const Eigen::VectorXd y = *Privatize(op.matrix * f0, 0.05, 4);
  absl::StatusOr<RecoveryProblem> problem =
      RecoveryProblem::Create(op.matrix, y, FeasibilityRadius(0.05, 15, 0.5));
  absl::StatusOr<RecoveryResult> cold = BpdSolve(*problem);
  HC_ASSERT_OK(cold);
  absl::StatusOr<RecoveryResult> warm = BpdSolve(*problem, {}, cold->estimate);
  HC_ASSERT_OK(warm);
  EXPECT_THAT(warm->objective, DoubleNear(cold->objective, 1e-5));
}

TEST(BpdSolveTest, IsDeterministic) {
  const DiffusionOperator op = *HeatKernelMatrix(40, 20, 0.5, 1.0);
  Eigen::VectorXd f0 = Eigen::VectorXd::Zero(40);
  f0(19) = 1.0;
  const Eigen::VectorXd y = *Privatize(op.matrix * f0, 0.1, 9);
  absl::StatusOr<RecoveryProblem> problem =
      RecoveryProblem::Create(op.matrix, y, FeasibilityRadius(0.1, 20, 0.3));
  EXPECT_EQ(BpdSolve(*problem)->estimate, BpdSolve(*problem)->estimate);
}

// scipy.optimize.lsq_linear (BVLS) distance: 3.0461201495957075.
TEST(MinimizeBoxResidualTest, BracketContainsScipyDistance) {
  const DiffusionOperator op = *HeatKernelMatrix(30, 20, 0.5, 0.3);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) y(i) = std::sin(0.7 * i);
  const BoxResidual r = MinimizeBoxResidual(op.matrix, y, 0.0, 20000);
  EXPECT_LE(r.lower, r.upper + 1e-12);
  EXPECT_GE(r.point.minCoeff(), 0.0);
  EXPECT_LE(r.point.maxCoeff(), 1.0);
  EXPECT_THAT((op.matrix * r.point - y).norm(), DoubleNear(r.upper, 1e-12));
  EXPECT_LE(r.lower, 3.0461201495957075);
  EXPECT_GE(r.upper, 3.0461201495957075 - 1e-12);
  EXPECT_LE(r.upper, 3.0461201495957075 * (1 + 5e-3));
}

}  // namespace
}  // namespace heatcloak
