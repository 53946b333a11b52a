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

#include "heatcloak/emd.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace heatcloak {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassEpsilon = 1e-14;
constexpr double kDualityGapTolerance = 1e-9;
constexpr int kTriangleCheckLimit = 64;

absl::Status CheckComparable(const SourceVector& p, const SourceVector& q) {
  if (p.grid != q.grid) {
    return absl::InvalidArgumentError("GridMismatch: p and q use different grids");
  }
  if (!IsNormalized(p) || !IsNormalized(q)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "NotNormalized: masses are %.17g and %.17g", p.Mass(), q.Mass()));
  }
  return absl::OkStatus();
}

// Min-cost transportation between supplies `a` and demands `b` (both summing
// to one) with costs `cost`, by successive shortest paths using
// Bellman-Ford on the residual network.
//
// Node layout: 0 = source, 1..r = supplies, r+1..r+c = demands, r+c+1 = sink.
class Transportation {
 public:
  Transportation(std::vector<double> a, std::vector<double> b,
                 Eigen::MatrixXd cost)
      : a_(std::move(a)), b_(std::move(b)), cost_(std::move(cost)),
        flow_(Eigen::MatrixXd::Zero(a_.size(), b_.size())),
        supply_left_(a_), demand_left_(b_) {
    const double scale = std::max(1.0, cost_.cwiseAbs().maxCoeff());
    relax_tolerance_ = 1e-13 * scale;
  }

  absl::Status Solve() {
    const int r = static_cast<int>(a_.size());
    const int c = static_cast<int>(b_.size());
    const int max_augmentations = 50 * (r + c) * (r + c) + 100;
    for (int iter = 0; iter < max_augmentations; ++iter) {
      double remaining = 0.0;
      for (double s : supply_left_) remaining += s;
      if (remaining <= kMassEpsilon) return absl::OkStatus();
      if (!Augment()) return absl::OkStatus();
    }
    return absl::InternalError(
        "SolverFailure: augmentation limit reached in transport solve");
  }

  // Recovers node potentials certifying optimality and returns the gap
  // between the primal cost and the dual objective.
  absl::StatusOr<double> DualityGap() const {
    const int r = static_cast<int>(a_.size());
    const int c = static_cast<int>(b_.size());
    std::vector<double> phi(r + c, 0.0);
    bool changed = true;
    for (int round = 0; round <= r + c && changed; ++round) {
      changed = false;
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
          if (phi[i] + cost_(i, j) < phi[r + j] - relax_tolerance_) {
            phi[r + j] = phi[i] + cost_(i, j);
            changed = true;
          }
          if (flow_(i, j) > kMassEpsilon &&
              phi[r + j] - cost_(i, j) < phi[i] - relax_tolerance_) {
            phi[i] = phi[r + j] - cost_(i, j);
            changed = true;
          }
        }
      }
    }
    if (changed) {
      return absl::InternalError(
          "SolverFailure: residual network has a negative cycle");
    }
    double dual = 0.0;
    for (int j = 0; j < c; ++j) dual += b_[j] * phi[r + j];
    for (int i = 0; i < r; ++i) dual -= a_[i] * phi[i];
    return std::abs(Cost() - dual);
  }

  double Cost() const { return flow_.cwiseProduct(cost_).sum(); }
  const Eigen::MatrixXd& flow() const { return flow_; }

 private:
  bool Augment() {
    const int r = static_cast<int>(a_.size());
    const int c = static_cast<int>(b_.size());
    const int sink = r + c + 1;
    std::vector<double> dist(r + c + 2, kInf);
    std::vector<int> pred(r + c + 2, -1);
    dist[0] = 0.0;
    for (int i = 0; i < r; ++i) {
      if (supply_left_[i] > kMassEpsilon) {
        dist[1 + i] = 0.0;
        pred[1 + i] = 0;
      }
    }
    bool changed = true;
    for (int round = 0; round <= r + c && changed; ++round) {
      changed = false;
      for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) {
          const int u = 1 + i;
          const int v = 1 + r + j;
          if (dist[u] < kInf &&
              dist[u] + cost_(i, j) < dist[v] - relax_tolerance_) {
            dist[v] = dist[u] + cost_(i, j);
            pred[v] = u;
            changed = true;
          }
          if (flow_(i, j) > kMassEpsilon && dist[v] < kInf &&
              dist[v] - cost_(i, j) < dist[u] - relax_tolerance_) {
            dist[u] = dist[v] - cost_(i, j);
            pred[u] = v;
            changed = true;
          }
        }
      }
    }
    int best_demand = -1;
    for (int j = 0; j < c; ++j) {
      const int v = 1 + r + j;
      if (demand_left_[j] > kMassEpsilon && dist[v] < kInf &&
          (best_demand < 0 || dist[v] < dist[1 + r + best_demand])) {
        best_demand = j;
      }
    }
    if (best_demand < 0) return false;
    pred[sink] = 1 + r + best_demand;

    // Walk back from the sink to find the bottleneck.
    double amount = demand_left_[best_demand];
    int v = pred[sink];
    while (pred[v] != 0) {
      const int u = pred[v];
      if (u > r) {  // reverse edge demand u -> supply v
        amount = std::min(amount, flow_(v - 1, u - 1 - r));
      }
      v = u;
    }
    amount = std::min(amount, supply_left_[v - 1]);

    v = pred[sink];
    demand_left_[v - 1 - r] -= amount;
    while (pred[v] != 0) {
      const int u = pred[v];
      if (u > r) {
        flow_(v - 1, u - 1 - r) -= amount;
      } else {
        flow_(u - 1, v - 1 - r) += amount;
      }
      v = u;
    }
    supply_left_[v - 1] -= amount;
    return true;
  }

  std::vector<double> a_;
  std::vector<double> b_;
  Eigen::MatrixXd cost_;
  Eigen::MatrixXd flow_;
  std::vector<double> supply_left_;
  std::vector<double> demand_left_;
  double relax_tolerance_ = 0.0;
};

}  // namespace

std::vector<double> UnitIntervalGrid(int n) {
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = static_cast<double>(i + 1) / n;
  return grid;
}

absl::StatusOr<SourceVector> SourceVector::Create(Eigen::VectorXd weights,
                                                  std::vector<double> grid) {
  if (weights.size() < 1) {
    return absl::InvalidArgumentError("source vector must be nonempty");
  }
  if (static_cast<size_t>(weights.size()) != grid.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "GridMismatch: %d weights but %d grid points", weights.size(),
        grid.size()));
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights(i) >= 0.0 && weights(i) <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "source weight %d = %g outside [0,1]", i, weights(i)));
    }
  }
  return SourceVector{std::move(weights), std::move(grid)};
}

absl::StatusOr<SourceVector> SourceVector::OnUnitInterval(
    Eigen::VectorXd weights) {
  std::vector<double> grid = UnitIntervalGrid(static_cast<int>(weights.size()));
  return Create(std::move(weights), std::move(grid));
}

absl::StatusOr<SourceVector> SourceVector::OnNodes(Eigen::VectorXd weights) {
  std::vector<double> grid(weights.size());
  for (size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i);
  return Create(std::move(weights), std::move(grid));
}

absl::StatusOr<GroundMetric> GroundMetric::Create(Eigen::MatrixXd d) {
  if (d.rows() != d.cols() || d.rows() == 0) {
    return absl::InvalidArgumentError("distance matrix must be square");
  }
  const int n = static_cast<int>(d.rows());
  for (int i = 0; i < n; ++i) {
    if (d(i, i) != 0.0) {
      return absl::InvalidArgumentError("distance matrix diagonal must be zero");
    }
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(d(i, j)) || d(i, j) < 0.0) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "distance (%d,%d) = %g is not finite and nonnegative", i, j,
            d(i, j)));
      }
      if (std::abs(d(i, j) - d(j, i)) > 1e-12 * std::max(1.0, d(i, j))) {
        return absl::InvalidArgumentError("distance matrix is not symmetric");
      }
    }
  }
  if (n <= kTriangleCheckLimit) {
    const double slack = 1e-12 * std::max(1.0, d.maxCoeff());
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (d(i, j) > d(i, k) + d(k, j) + slack) {
            return absl::InvalidArgumentError(absl::StrFormat(
                "triangle inequality fails for (%d,%d) via %d", i, j, k));
          }
        }
      }
    }
  }
  return GroundMetric(std::move(d));
}

GroundMetric GroundMetric::OnLine(const std::vector<double>& grid) {
  const int n = static_cast<int>(grid.size());
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) d(i, j) = std::abs(grid[i] - grid[j]);
  }
  return GroundMetric(std::move(d));
}

bool IsNormalized(const SourceVector& f, double tolerance) {
  return std::abs(f.Mass() - 1.0) <= tolerance;
}

absl::StatusOr<SourceVector> NormalizeL1(const SourceVector& f) {
  const double mass = f.weights.lpNorm<1>();
  if (!(mass > 0.0)) {
    return absl::InvalidArgumentError("ZeroMass: cannot normalise a zero vector");
  }
  return SourceVector{f.weights / mass, f.grid};
}

absl::StatusOr<double> EmdLine(const SourceVector& p, const SourceVector& q) {
  if (absl::Status s = CheckComparable(p, q); !s.ok()) return s;
  for (size_t i = 1; i < p.grid.size(); ++i) {
    if (!(p.grid[i] > p.grid[i - 1])) {
      return absl::InvalidArgumentError("grid must be strictly ascending");
    }
  }
  double cdf_p = 0.0;
  double cdf_q = 0.0;
  double total = 0.0;
  for (int i = 0; i + 1 < p.size(); ++i) {
    cdf_p += p.weights(i);
    cdf_q += q.weights(i);
    total += std::abs(cdf_p - cdf_q) * (p.grid[i + 1] - p.grid[i]);
  }
  return total;
}

absl::StatusOr<EmdSolution> EmdFlow(const SourceVector& p,
                                    const SourceVector& q,
                                    const GroundMetric& metric) {
  if (absl::Status s = CheckComparable(p, q); !s.ok()) return s;
  if (metric.size() != p.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "GridMismatch: metric has %d points, vectors have %d", metric.size(),
        p.size()));
  }
  const int n = p.size();
  std::vector<int> rows;
  std::vector<int> cols;
  for (int i = 0; i < n; ++i) {
    if (p.weights(i) > 0.0) rows.push_back(i);
    if (q.weights(i) > 0.0) cols.push_back(i);
  }
  const double mass_p = p.Mass();
  const double mass_q = q.Mass();
  std::vector<double> a(rows.size());
  std::vector<double> b(cols.size());
  for (size_t i = 0; i < rows.size(); ++i) a[i] = p.weights(rows[i]) / mass_p;
  for (size_t j = 0; j < cols.size(); ++j) b[j] = q.weights(cols[j]) / mass_q;
  Eigen::MatrixXd cost(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < cols.size(); ++j) {
      cost(i, j) = metric(rows[i], cols[j]);
    }
  }

  Transportation problem(std::move(a), std::move(b), std::move(cost));
  if (absl::Status s = problem.Solve(); !s.ok()) return s;
  absl::StatusOr<double> gap = problem.DualityGap();
  if (!gap.ok()) return gap.status();
  if (*gap > kDualityGapTolerance * std::max(1.0, metric.Diameter())) {
    return absl::InternalError(
        absl::StrFormat("SolverFailure: duality gap %g", *gap));
  }

  EmdSolution solution;
  solution.flow.amount = Eigen::MatrixXd::Zero(n, n);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < cols.size(); ++j) {
      solution.flow.amount(rows[i], cols[j]) = problem.flow()(i, j);
    }
  }
  solution.flow.total = solution.flow.amount.sum();
  if (std::abs(solution.flow.total - 1.0) > 1e-9) {
    return absl::InternalError(absl::StrFormat(
        "SolverFailure: transported mass %.17g", solution.flow.total));
  }
  solution.cost = std::max(0.0, problem.Cost());
  solution.duality_gap = *gap;
  return solution;
}

absl::StatusOr<GroundMetric> ShortestPathMetric(const Graph& g,
                                                PathLength length) {
  const int n = g.num_nodes();
  const auto adj = g.Neighbours();
  Eigen::MatrixXd d = Eigen::MatrixXd::Constant(n, n, kInf);
  for (int src = 0; src < n; ++src) {
    d(src, src) = 0.0;
    if (length == PathLength::kHops) {
      std::queue<int> frontier;
      frontier.push(src);
      while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop();
        for (int v : adj[u]) {
          if (d(src, v) == kInf) {
            d(src, v) = d(src, u) + 1.0;
            frontier.push(v);
          }
        }
      }
    } else {
      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      heap.emplace(0.0, src);
      while (!heap.empty()) {
        const auto [du, u] = heap.top();
        heap.pop();
        if (du > d(src, u)) continue;
        for (int v : adj[u]) {
          const double nd = du + 1.0 / g.weights()(u, v);
          if (nd < d(src, v)) {
            d(src, v) = nd;
            heap.emplace(nd, v);
          }
        }
      }
    }
  }
  if (!d.allFinite()) {
    return absl::FailedPreconditionError(
        "Disconnected: some node pairs are unreachable");
  }
  // Dijkstra distances are symmetric up to summation order.
  d = 0.5 * (d + d.transpose()).eval();
  return GroundMetric::Create(std::move(d));
}

}  // namespace heatcloak
