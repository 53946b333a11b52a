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

#include "heatcloak/graph.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "Eigen/Eigenvalues"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "heatcloak/random.h"

namespace heatcloak {
namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kPsdTolerance = 1e-9;

Graph FromEdges(int n, const std::vector<std::pair<int, int>>& edges) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : edges) {
    w(i, j) = 1.0;
    w(j, i) = 1.0;
  }
  return *GraphLaplacian(w);
}

}  // namespace

absl::StatusOr<Graph> GraphLaplacian(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols() || w.rows() == 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("weight matrix must be square and nonempty, got %dx%d",
                        w.rows(), w.cols()));
  }
  const int n = static_cast<int>(w.rows());
  for (int i = 0; i < n; ++i) {
    if (w(i, i) != 0.0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("NonzeroDiagonal: W(%d,%d) = %g", i, i, w(i, i)));
    }
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(w(i, j)) || w(i, j) < 0.0) {
        return absl::InvalidArgumentError(
            absl::StrFormat("NegativeWeight: W(%d,%d) = %g", i, j, w(i, j)));
      }
      if (std::abs(w(i, j) - w(j, i)) >
          kSymmetryTolerance * std::max(1.0, std::abs(w(i, j)))) {
        return absl::InvalidArgumentError(
            absl::StrFormat("Asymmetric: W(%d,%d) != W(%d,%d)", i, j, j, i));
      }
    }
  }
  Eigen::MatrixXd sym = 0.5 * (w + w.transpose());
  Eigen::VectorXd degrees = sym.rowwise().sum();
  Eigen::MatrixXd laplacian = -sym;
  laplacian.diagonal() += degrees;
  return Graph(std::move(sym), std::move(degrees), std::move(laplacian));
}

std::vector<std::vector<int>> Graph::Neighbours() const {
  const int n = num_nodes();
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && weights_(i, j) > 0.0) adj[i].push_back(j);
    }
  }
  return adj;
}

bool Graph::IsConnected() const {
  const int n = num_nodes();
  const auto adj = Neighbours();
  std::vector<bool> seen(n, false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int visited = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++visited;
        frontier.push(v);
      }
    }
  }
  return visited == n;
}

absl::StatusOr<LaplacianSpectrum> ComputeLaplacianSpectrum(const Graph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.laplacian());
  if (solver.info() != Eigen::Success) {
    return absl::InternalError("EigenFailure: Laplacian eigensolver failed");
  }
  LaplacianSpectrum spectrum{solver.eigenvalues(), solver.eigenvectors()};
  // Roundoff leaves the null eigenvalues at +-n eps |L|; at long times even
  // +1e-16 visibly perturbs e^{-tau s}, so those are set to exactly zero.
  const double roundoff =
      64.0 * std::numeric_limits<double>::epsilon() *
      std::max(1.0, spectrum.eigenvalues.cwiseAbs().maxCoeff()) *
      std::max<Eigen::Index>(1, spectrum.eigenvalues.size());
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    double& s = spectrum.eigenvalues(i);
    if (s < -kPsdTolerance) {
      return absl::InternalError(absl::StrFormat(
          "EigenFailure: Laplacian eigenvalue %g is negative", s));
    }
    if (s < roundoff) s = 0.0;
  }
  return spectrum;
}

Graph CompleteGraph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return FromEdges(n, edges);
}

Graph StarGraph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j < n; ++j) edges.emplace_back(0, j);
  return FromEdges(n, edges);
}

Graph PathGraph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j < n; ++j) edges.emplace_back(j - 1, j);
  return FromEdges(n, edges);
}

absl::StatusOr<SbmGraph> SbmSample(int n, int num_communities, double p_in,
                                   double p_out, uint64_t seed) {
  if (num_communities < 1 || n < num_communities) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need 1 <= communities <= n, got n=%d communities=%d", n,
        num_communities));
  }
  if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0)) {
    return absl::InvalidArgumentError("edge probabilities must lie in [0,1]");
  }
  std::vector<int> community(n);
  for (int i = 0; i < n; ++i) {
    community[i] = static_cast<int>(static_cast<int64_t>(i) *
                                    num_communities / n);
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double p = community[i] == community[j] ? p_in : p_out;
      // A uniform in (0,1) never reaches 1, so p = 1 always connects and
      // p = 0 never does.
      if (CounterUniform(seed, static_cast<uint64_t>(i),
                         static_cast<uint64_t>(j)) < p) {
        w(i, j) = 1.0;
        w(j, i) = 1.0;
      }
    }
  }
  auto graph = GraphLaplacian(w);
  if (!graph.ok()) return graph.status();
  const bool connected = graph->IsConnected();
  return SbmGraph{*std::move(graph), std::move(community), connected};
}

}  // namespace heatcloak
