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

#ifndef HEATCLOAK_GRAPH_H_
#define HEATCLOAK_GRAPH_H_

#include <cstdint>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"

namespace heatcloak {

// Weighted undirected graph with its degree matrix and Laplacian L = D - W.
// Immutable after construction; use GraphLaplacian() to build one.
class Graph {
 public:
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& degrees() const { return degrees_; }
  const Eigen::MatrixXd& laplacian() const { return laplacian_; }
  int num_nodes() const { return static_cast<int>(weights_.rows()); }

  // True when every pair of nodes is joined by a path of positive-weight
  // edges.
  bool IsConnected() const;

  // Adjacency lists over edges with positive weight.
  std::vector<std::vector<int>> Neighbours() const;

 private:
  friend absl::StatusOr<Graph> GraphLaplacian(const Eigen::MatrixXd& w);
  Graph(Eigen::MatrixXd w, Eigen::VectorXd d, Eigen::MatrixXd l)
      : weights_(std::move(w)), degrees_(std::move(d)),
        laplacian_(std::move(l)) {}

  Eigen::MatrixXd weights_;
  Eigen::VectorXd degrees_;
  Eigen::MatrixXd laplacian_;
};

// Validates W (square, symmetric, nonnegative, zero diagonal) and forms the
// Laplacian. Errors: InvalidArgument with "Asymmetric", "NegativeWeight" or
// "NonzeroDiagonal" in the message.
absl::StatusOr<Graph> GraphLaplacian(const Eigen::MatrixXd& w);

// Eigendecomposition L = U diag(s) U^T with s ascending. Eigenvalues in
// (-1e-9, 0) are clamped to zero; anything more negative is an error.
struct LaplacianSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // columns
};
absl::StatusOr<LaplacianSpectrum> ComputeLaplacianSpectrum(const Graph& g);

// Unit-weight builders.
Graph CompleteGraph(int n);
Graph StarGraph(int n);  // node 0 is the hub
Graph PathGraph(int n);

// A stochastic block model sample together with the community of each node.
struct SbmGraph {
  Graph graph;
  std::vector<int> community;
  bool connected = false;
};

// Nodes are split into contiguous, near-equal blocks. Each unordered pair
// (i, j) is an edge with probability p_in (same block) or p_out, decided by
// a uniform keyed on (seed, i, j), so the sample does not depend on
// iteration order.
absl::StatusOr<SbmGraph> SbmSample(int n, int num_communities, double p_in,
                                   double p_out, uint64_t seed);

}  // namespace heatcloak

#endif  // HEATCLOAK_GRAPH_H_
