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

// Forward operators mapping source intensities to sensor measurements: the
// free-space heat kernel on the unit interval and graph diffusion e^{-tau L}.

#ifndef HEATCLOAK_DIFFUSION_H_
#define HEATCLOAK_DIFFUSION_H_

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "heatcloak/emd.h"
#include "heatcloak/graph.h"

namespace heatcloak {

enum class OperatorKind { kInterval, kGraph };

// Rows are sensors (m), columns are sources (n). For the interval kernel
// effective_time = mu * t; for graphs effective_time = tau with mu = 1 and
// t = tau.
struct DiffusionOperator {
  Eigen::MatrixXd matrix;
  OperatorKind kind = OperatorKind::kInterval;
  double effective_time = 0.0;
  double mu = 1.0;
  double t = 0.0;

  int num_sensors() const { return static_cast<int>(matrix.rows()); }
  int num_sources() const { return static_cast<int>(matrix.cols()); }
};

// (4 pi T)^{-1/2} exp(-x^2 / (4T)). Error "InvalidTime" unless T > 0.
absl::StatusOr<double> GaussianKernel(double x, double effective_time);

// Entry (i, j) = GaussianKernel(j/n - i/m, mu * t) for sensor i = 1..m at
// i/m and source j = 1..n at j/n.
absl::StatusOr<DiffusionOperator> HeatKernelMatrix(int n, int m, double mu,
                                                   double t);

// e^{-tau L} = U exp(-tau S) U^T from the symmetric eigendecomposition.
absl::StatusOr<DiffusionOperator> GraphDiffusionOperator(const Graph& g,
                                                         double tau);
absl::StatusOr<DiffusionOperator> GraphDiffusionOperator(
    const LaplacianSpectrum& spectrum, double tau);

// y = A f. Error "DimensionMismatch" when the sizes disagree.
absl::StatusOr<Eigen::VectorXd> Forward(const DiffusionOperator& op,
                                        const SourceVector& f);
absl::StatusOr<Eigen::VectorXd> Forward(const DiffusionOperator& op,
                                        const Eigen::VectorXd& f);

}  // namespace heatcloak

#endif  // HEATCLOAK_DIFFUSION_H_
