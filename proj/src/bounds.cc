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

#include "heatcloak/bounds.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "heatcloak/diffusion.h"

namespace heatcloak {

absl::StatusOr<BoundValue> UpperBoundEmd(const BoundInputs& in) {
  if (in.k < 1 || in.m < 1 || in.n < 1) {
    return absl::InvalidArgumentError("k, m and n must be positive");
  }
  if (!(in.T > 0.0) || !(in.sigma >= 0.0) || !(in.sep > 0.0)) {
    return absl::InvalidArgumentError(
        "need T > 0, sigma >= 0 and a positive separation margin");
  }
  const double k = in.k;
  const double root_t = std::sqrt(in.T);
  BoundValue out;
  out.c = std::min(k, root_t * (in.sigma +
                                k * std::exp(-in.sep * in.sep / (4.0 * in.T))));
  out.hypothesis_enough_sensors = in.m * std::sqrt(in.T / 2.0) > 1.0;
  out.hypothesis_early = std::sqrt(2.0 * in.T) < 1.0;
  if (in.k > 1) {
    if (in.min_source_distance.has_value()) {
      out.hypothesis_separated =
          *in.min_source_distance > std::sqrt(2.0 * in.T) + 2.0 * in.sep;
    } else {
      out.separation_checked = false;
    }
  }
  if (!out.HypothesesHold()) {
    out.value = 1.0;
    out.capped = true;
    return out;
  }
  const double c1 = std::min(1.0, out.c);
  if (c1 >= 1.0) {
    out.prefactor_infinite = true;
    out.value = 1.0;
    out.capped = true;
    return out;
  }
  const double t15 = in.T * root_t;
  const double bracket = std::sqrt(t15 * out.c / (root_t + 1.0)) / k +
                         k * c1 + in.T * in.T * out.c / ((in.T + 1.0) * k);
  const double raw = bracket / (1.0 - c1);
  out.capped = raw >= 1.0;
  out.value = std::min(1.0, raw);
  return out;
}

absl::StatusOr<double> LowerBoundEmd(double T, double sigma, int m) {
  if (!(T > 0.0) || !(sigma >= 0.0) || m < 1) {
    return absl::InvalidArgumentError("need T > 0, sigma >= 0, m >= 1");
  }
  // One square root and one division: sigma scales the result exactly and
  // m -> 4m halves it exactly.
  return std::min(0.5, sigma / std::sqrt(m / (T * T * T)));
}

absl::StatusOr<LipschitzCheck> LipschitzForwardBound(const SourceVector& f,
                                                     const SourceVector& f2,
                                                     int m, double T) {
  absl::StatusOr<double> emd = EmdLine(f, f2);
  if (!emd.ok()) return emd.status();
  absl::StatusOr<DiffusionOperator> op = HeatKernelMatrix(f.size(), m, 1.0, T);
  if (!op.ok()) return op.status();
  LipschitzCheck out;
  out.emd = *emd;
  out.bound = std::sqrt(static_cast<double>(m)) / std::pow(T, 1.5) * *emd;
  out.actual = (op->matrix * (f.weights - f2.weights)).norm();
  out.ratio = out.actual > 0.0 ? out.bound / out.actual : 0.0;
  return out;
}

absl::StatusOr<FanoPacking> MakeFanoPacking(double a, int n) {
  if (n < 1 || !(a >= 0.0) || a > 0.5) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need n >= 1 and 0 <= a <= 1/2, got n=%d a=%g", n, a));
  }
  FanoPacking out;
  out.a = a;
  out.n = n;
  // Grid point j (0-based) sits at (j + 1) / n.
  const std::array<double, 5> requested = {0.5 - a, 0.5 - a / 2, 0.5,
                                           0.5 + a / 2, 0.5 + a};
  std::array<int, 5> index{};
  for (size_t s = 0; s < requested.size(); ++s) {
    const long j = std::lround(requested[s] * n) - 1;
    if (j < 0 || j >= n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "GridTooCoarse: location %g is outside the grid", requested[s]));
    }
    index[s] = static_cast<int>(j);
    out.snap_error = std::max(
        out.snap_error, std::abs(static_cast<double>(j + 1) / n - requested[s]));
  }
  if (a > 0.0) {
    for (size_t s = 1; s < index.size(); ++s) {
      if (index[s] == index[s - 1]) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "GridTooCoarse: offsets a=%g and a/2 do not resolve on n=%d", a, n));
      }
    }
  }
  const std::array<std::array<double, 5>, 4> mass = {{
      {0.0, 0.0, 1.0, 0.0, 0.0},
      {0.0, 0.5, 0.0, 0.5, 0.0},
      {0.25, 0.0, 0.5, 0.0, 0.25},
      {0.0, 0.0, 0.5, 0.0, 0.5},
  }};
  for (size_t v = 0; v < mass.size(); ++v) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (size_t s = 0; s < index.size(); ++s) w(index[s]) += mass[v][s];
    absl::StatusOr<SourceVector> member = SourceVector::OnUnitInterval(w);
    if (!member.ok()) return member.status();
    out.members[v] = *std::move(member);
  }
  const GroundMetric metric = GroundMetric::OnLine(out.members[0].grid);
  for (int i = 0; i < 4; ++i) {
    out.emd(i, i) = 0.0;
    for (int j = i + 1; j < 4; ++j) {
      absl::StatusOr<EmdSolution> sol =
          EmdFlow(out.members[i], out.members[j], metric);
      if (!sol.ok()) return sol.status();
      out.emd(i, j) = out.emd(j, i) = sol->cost;
    }
  }
  return out;
}

absl::StatusOr<double> GaussianMeasurementKl(const Eigen::MatrixXd& op,
                                             const SourceVector& f,
                                             const SourceVector& f2,
                                             double sigma) {
  if (!(sigma > 0.0)) {
    return absl::InvalidArgumentError("sigma must be positive for KL");
  }
  if (op.cols() != f.size() || op.cols() != f2.size()) {
    return absl::InvalidArgumentError("DimensionMismatch in KL computation");
  }
  return (op * (f.weights - f2.weights)).squaredNorm() / (2.0 * sigma * sigma);
}

}  // namespace heatcloak
