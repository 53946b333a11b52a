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

// Earth Mover Distance between unit-mass distributions on a discrete set of
// source locations, plus the l1 normalisation used before scoring.

#ifndef HEATCLOAK_EMD_H_
#define HEATCLOAK_EMD_H_

#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "heatcloak/graph.h"

namespace heatcloak {

// Nonnegative intensities over an ordered list of source locations. For the
// unit interval the grid holds positions {1/n, ..., 1}; for graphs it holds
// node ids.
struct SourceVector {
  Eigen::VectorXd weights;
  std::vector<double> grid;

  int size() const { return static_cast<int>(weights.size()); }
  double Mass() const { return weights.sum(); }

  // Validates 0 <= w_i <= 1 and grid.size() == weights.size() >= 1.
  static absl::StatusOr<SourceVector> Create(Eigen::VectorXd weights,
                                             std::vector<double> grid);
  // Grid {1/n, ..., 1}.
  static absl::StatusOr<SourceVector> OnUnitInterval(Eigen::VectorXd weights);
  // Grid {0, 1, ..., n-1}.
  static absl::StatusOr<SourceVector> OnNodes(Eigen::VectorXd weights);
};

std::vector<double> UnitIntervalGrid(int n);

// Symmetric, zero-diagonal, nonnegative, finite distance matrix. The
// triangle inequality is verified for n <= 64 and trusted above.
class GroundMetric {
 public:
  static absl::StatusOr<GroundMetric> Create(Eigen::MatrixXd distances);
  // |x_i - x_j| on a line.
  static GroundMetric OnLine(const std::vector<double>& grid);

  const Eigen::MatrixXd& distances() const { return distances_; }
  int size() const { return static_cast<int>(distances_.rows()); }
  double Diameter() const { return distances_.maxCoeff(); }
  double operator()(int i, int j) const { return distances_(i, j); }

 private:
  explicit GroundMetric(Eigen::MatrixXd d) : distances_(std::move(d)) {}
  Eigen::MatrixXd distances_;
};

// Transport plan: amount(i, j) moved from location i of p to location j of q.
struct Flow {
  Eigen::MatrixXd amount;
  double total = 0.0;
};

struct EmdSolution {
  Flow flow;
  double cost = 0.0;
  double duality_gap = 0.0;
};

// Rescales to unit l1 mass. Error "ZeroMass" when the mass is zero.
absl::StatusOr<SourceVector> NormalizeL1(const SourceVector& f);

// True when the entries sum to one within `tolerance`.
bool IsNormalized(const SourceVector& f, double tolerance = 1e-9);

// Closed form on a sorted line grid: sum_i |P_i - Q_i| (x_{i+1} - x_i) with
// P, Q the prefix sums. Spacing may be nonuniform.
absl::StatusOr<double> EmdLine(const SourceVector& p, const SourceVector& q);

// Exact transportation problem solved by successive shortest augmenting
// paths, restricted to the supports of p and q. Optimality is certified by a
// dual solution recovered from the final residual network; a gap above 1e-9
// is reported as "SolverFailure".
absl::StatusOr<EmdSolution> EmdFlow(const SourceVector& p,
                                    const SourceVector& q,
                                    const GroundMetric& metric);

enum class PathLength {
  kHops,           // every positive-weight edge has length 1
  kInverseWeight,  // edge (i, j) has length 1 / W_ij
};

// All-pairs shortest path metric. Error "Disconnected" if any pair is
// unreachable.
absl::StatusOr<GroundMetric> ShortestPathMetric(
    const Graph& g, PathLength length = PathLength::kHops);

}  // namespace heatcloak

#endif  // HEATCLOAK_EMD_H_
