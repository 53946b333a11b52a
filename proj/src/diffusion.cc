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

#include "heatcloak/diffusion.h"

#include <cmath>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace heatcloak {

absl::StatusOr<double> GaussianKernel(double x, double effective_time) {
  if (!(effective_time > 0.0) || !std::isfinite(effective_time)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("InvalidTime: T = %g must be positive", effective_time));
  }
  return std::exp(-x * x / (4.0 * effective_time)) /
         std::sqrt(4.0 * std::numbers::pi * effective_time);
}

absl::StatusOr<DiffusionOperator> HeatKernelMatrix(int n, int m, double mu,
                                                   double t) {
  if (n < 1 || m < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need n, m >= 1, got n=%d m=%d", n, m));
  }
  if (!(mu > 0.0) || !(t > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("InvalidTime: mu=%g t=%g must be positive", mu, t));
  }
  const double effective_time = mu * t;
  DiffusionOperator op;
  op.kind = OperatorKind::kInterval;
  op.effective_time = effective_time;
  op.mu = mu;
  op.t = t;
  op.matrix.resize(m, n);
  for (int j = 0; j < n; ++j) {
    const double source = static_cast<double>(j + 1) / n;
    for (int i = 0; i < m; ++i) {
      const double sensor = static_cast<double>(i + 1) / m;
      op.matrix(i, j) = *GaussianKernel(source - sensor, effective_time);
    }
  }
  return op;
}

absl::StatusOr<DiffusionOperator> GraphDiffusionOperator(
    const LaplacianSpectrum& spectrum, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("InvalidTime: tau = %g must be positive", tau));
  }
  const Eigen::MatrixXd& u = spectrum.eigenvectors;
  const Eigen::VectorXd decay = (-tau * spectrum.eigenvalues).array().exp();
  Eigen::MatrixXd a = u * decay.asDiagonal() * u.transpose();
  DiffusionOperator op;
  op.kind = OperatorKind::kGraph;
  op.effective_time = tau;
  op.mu = 1.0;
  op.t = tau;
  // The exact operator is entrywise nonnegative; clip roundoff below zero.
  op.matrix = (0.5 * (a + a.transpose())).cwiseMax(0.0);
  return op;
}

absl::StatusOr<DiffusionOperator> GraphDiffusionOperator(const Graph& g,
                                                         double tau) {
  absl::StatusOr<LaplacianSpectrum> spectrum = ComputeLaplacianSpectrum(g);
  if (!spectrum.ok()) return spectrum.status();
  return GraphDiffusionOperator(*spectrum, tau);
}

absl::StatusOr<Eigen::VectorXd> Forward(const DiffusionOperator& op,
                                        const Eigen::VectorXd& f) {
  if (f.size() != op.matrix.cols()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "DimensionMismatch: operator has %d sources, vector has %d",
        op.matrix.cols(), f.size()));
  }
  return Eigen::VectorXd(op.matrix * f);
}

absl::StatusOr<Eigen::VectorXd> Forward(const DiffusionOperator& op,
                                        const SourceVector& f) {
  return Forward(op, f.weights);
}

}  // namespace heatcloak
