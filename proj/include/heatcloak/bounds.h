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

// Evaluators for the upper and lower EMD error bounds of private source
// recovery on the interval, and the four-point packing behind the lower
// bound. Every hidden asymptotic constant is set to 1; the values are for
// trend and shape checks, not exact predictions.

#ifndef HEATCLOAK_BOUNDS_H_
#define HEATCLOAK_BOUNDS_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "heatcloak/emd.h"

namespace heatcloak {

inline constexpr char kConstantConvention[] =
    "all hidden O()/Omega() constants set to 1";

// `sep` is the separation margin A: sources must satisfy
// |x_i - x_j| > sqrt(2T) + 2 sep. `min_source_distance` is the actual
// smallest distance between sources, needed only to check that hypothesis
// when k > 1.
struct BoundInputs {
  int k = 1;
  double T = 0.5;
  double sigma = 0.1;
  int m = 50;
  int n = 100;
  double sep = 0.1;
  std::optional<double> min_source_distance;
};

struct BoundValue {
  double value = 1.0;
  double c = 0.0;  // min{k, sqrt(T) (sigma + k e^{-sep^2 / 4T})}
  bool hypothesis_enough_sensors = true;  // m sqrt(T/2) > 1
  bool hypothesis_early = true;           // sqrt(2T) < 1
  bool hypothesis_separated = true;       // sources far enough apart
  bool separation_checked = true;
  bool prefactor_infinite = false;        // min{1, C} == 1
  bool capped = false;
  std::string convention = kConstantConvention;

  bool HypothesesHold() const {
    return hypothesis_enough_sensors && hypothesis_early &&
           hypothesis_separated;
  }
};

// min{1, 1/(1 - min{1,C}) * ( (1/k) sqrt(T^{1.5} C / (sqrt(T) + 1))
//                             + k min{1,C} + T^2 C / ((T + 1) k) )}.
// Returns value 1 with flags when a hypothesis fails or the prefactor is
// infinite.
absl::StatusOr<BoundValue> UpperBoundEmd(const BoundInputs& in);

// min{1/2, T^{1.5} sigma / sqrt(m)}.
absl::StatusOr<double> LowerBoundEmd(double T, double sigma, int m);

struct LipschitzCheck {
  double emd = 0.0;
  double bound = 0.0;   // sqrt(m) / T^{1.5} * EMD(f, f2)
  double actual = 0.0;  // ||A f - A f2||_2 for the interval heat kernel
  double ratio = 0.0;   // bound / actual, 0 when actual == 0
};

// f and f2 must be normalised and share a unit-interval grid of size n; the
// actual norm uses the heat kernel with m sensors and effective time T.
absl::StatusOr<LipschitzCheck> LipschitzForwardBound(const SourceVector& f,
                                                     const SourceVector& f2,
                                                     int m, double T);

struct FanoPacking {
  double a = 0.0;
  int n = 0;
  // e_{1/2}; (e_{1/2-a/2} + e_{1/2+a/2}) / 2;
  // e_{1/2-a}/4 + e_{1/2}/2 + e_{1/2+a}/4; (e_{1/2} + e_{1/2+a}) / 2.
  std::array<SourceVector, 4> members;
  // Largest |requested - snapped| location over all atoms.
  double snap_error = 0.0;
  // Pairwise EMD computed by the transport solver.
  Eigen::Matrix4d emd;
};

// Places the four packing vectors on the grid {1/n, ..., 1}, snapping each
// atom to the nearest grid point. Error "GridTooCoarse" when a > 0 and the
// snapped atoms 1/2 - a, 1/2 - a/2, 1/2, 1/2 + a/2, 1/2 + a are not distinct
// grid points, or fall outside the grid.
absl::StatusOr<FanoPacking> MakeFanoPacking(double a, int n);

// KL divergence between N(A f, sigma^2 I) and N(A f2, sigma^2 I):
// ||A f - A f2||^2 / (2 sigma^2).
absl::StatusOr<double> GaussianMeasurementKl(const Eigen::MatrixXd& op,
                                             const SourceVector& f,
                                             const SourceVector& f2,
                                             double sigma);

}  // namespace heatcloak

#endif  // HEATCLOAK_BOUNDS_H_
