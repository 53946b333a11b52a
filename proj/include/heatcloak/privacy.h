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

// Sensitivity of a linear measurement operator under EMD neighbours,
// Gaussian-mechanism calibration, seeded (removable) noise, and spectral
// diagnostics relating sensitivity to conditioning.

#ifndef HEATCLOAK_PRIVACY_H_
#define HEATCLOAK_PRIVACY_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "heatcloak/diffusion.h"
#include "heatcloak/graph.h"

namespace heatcloak {

using NeighbourPair = std::pair<int, int>;

// epsilon > 0, 0 < delta < 1, alpha > 0 (EMD radius of the neighbour
// relation).
struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 1.0;

  static absl::StatusOr<PrivacyParams> Create(double epsilon, double delta,
                                              double alpha = 1.0);
};

// How sigma scales with log(1.25/delta).
//   kPrinted:  sigma = 2 ln(1.25/delta) * Delta2 / epsilon
//   kStandard: sigma = sqrt(2 ln(1.25/delta)) * Delta2 / epsilon
enum class NoiseMultiplier { kPrinted, kStandard };

double NoiseMultiplierValue(NoiseMultiplier multiplier, double delta);
absl::StatusOr<NoiseMultiplier> ParseNoiseMultiplier(const std::string& name);
std::string NoiseMultiplierName(NoiseMultiplier multiplier);

absl::StatusOr<double> GaussianSigma(
    const PrivacyParams& params, double delta2,
    NoiseMultiplier multiplier = NoiseMultiplier::kPrinted);

struct SensitivityReport {
  double delta2 = 0.0;
  NeighbourPair argmax_pair{0, 0};
  // ||M_i - M_j||_2 for each neighbour pair, in input order.
  std::vector<double> pair_norms;
  double scale = 1.0;  // delta2 = scale * max(pair_norms)
};

// Interpretation of alpha on the interval grid, where adjacent sources are
// 1/n apart.
//   kGridStep:  Delta2 = alpha * max_i ||A_i - A_{i+1}||_2. With alpha = 1
//               this is the sensitivity used in the experiments.
//   kEmdRadius: Delta2 = alpha * n * max_i ||A_i - A_{i+1}||_2, i.e. alpha
//               is an EMD radius in unit-interval distance.
enum class LineNeighbourScale { kGridStep, kEmdRadius };

// Exact adjacent-column sensitivity. Error "TooFewSources" when n < 2.
absl::StatusOr<SensitivityReport> SensitivityLine(
    const DiffusionOperator& op, double alpha,
    LineNeighbourScale scale = LineNeighbourScale::kGridStep);

// alpha * max over listed pairs of ||M_i - M_j||_2. Error "EmptyPairs".
absl::StatusOr<SensitivityReport> SensitivityGeneral(
    const Eigen::MatrixXd& m, absl::Span<const NeighbourPair> pairs,
    double alpha);

std::vector<NeighbourPair> LineNeighbourPairs(int n);
// Pairs (i < j) joined by a positive-weight edge, i.e. hop distance 1.
std::vector<NeighbourPair> GraphNeighbourPairs(const Graph& g);

// Seeded noise. The noise for coordinate i is a pure function of
// (seed, i), rounded to a multiple of `quantum`. Measurements are rounded
// to the same grid before noise is added, so the release is an exact sum
// and the noise can be subtracted again without error.
struct NoiseOptions {
  double quantum = 0x1.0p-40;
};

// N(0, sigma^2) noise rounded to the quantum grid.
absl::StatusOr<Eigen::VectorXd> SeededNoise(int length, double sigma,
                                            uint64_t seed,
                                            const NoiseOptions& options = {});

// Rounds each entry to the nearest multiple of options.quantum.
Eigen::VectorXd SnapToQuantum(const Eigen::VectorXd& y,
                              const NoiseOptions& options = {});

// y_tilde = snap(y) + noise. With sigma = 0 the input is returned unchanged.
// Error "OutOfRange" if a value is too large for the sum to be exact at the
// configured quantum (|value| >= 2^52 * quantum).
absl::StatusOr<Eigen::VectorXd> Privatize(const Eigen::VectorXd& y,
                                          double sigma, uint64_t seed,
                                          const NoiseOptions& options = {});

// Regenerates the noise of a Privatize call with the same (sigma, seed,
// length, options) and subtracts it. denoise(privatize(y)) == snap(y)
// bit for bit, hence == y for any y already on the quantum grid.
absl::StatusOr<Eigen::VectorXd> DenoiseBackdoor(
    const Eigen::VectorXd& y_tilde, double sigma, uint64_t seed,
    const NoiseOptions& options = {});

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = true;
  bool holds = true;
};

struct SpectralDiagnostics {
  Eigen::VectorXd singular_values;  // descending
  // s_max / smallest nonzero singular value (pseudo-inverse convention).
  double kappa2 = 1.0;
  // s_max / s_{min(m,n)}; infinite when M is rank deficient.
  double kappa2_full = 1.0;
  double coherence_mu = 0.0;
  double delta2 = 0.0;
  double source_diameter = 0.0;  // hop diameter of the neighbour graph
  std::vector<BoundCheck> lemma_bounds;
};

// Full SVD based diagnostics. The checks reported are
//   "ill_conditioned":      Delta2(M / ||M||_2) >= alpha / kappa2_full,
//                           applicable when rows >= cols;
//   "column_norm_gap":      |‖M_i‖ - ‖M_j‖| <= nu / alpha over neighbours;
//   "tail_spectrum_stated": sum of all but the largest singular value
//                           <= (n+1)^{3/2} rho nu / alpha;
//   "tail_spectrum_proof":  same sum <= (sqrt(min(m,n)) + 1) rho (n-1) nu /
//                           alpha,
// with nu = Delta2(M) and rho the hop diameter of the neighbour pairs.
// Error "ZeroMatrix" for an all-zero M.
absl::StatusOr<SpectralDiagnostics> ComputeSpectralDiagnostics(
    const Eigen::MatrixXd& m, absl::Span<const NeighbourPair> pairs,
    double alpha);

// sum_{k >= 2} e^{-tau s_k} |U_ik - U_jk| from the Laplacian
// eigendecomposition, an upper bound on ||(A_G)_i - (A_G)_j||_2.
absl::StatusOr<double> GraphSensitivityBound(const Graph& g, double tau, int i,
                                             int j);
absl::StatusOr<double> GraphSensitivityBound(const LaplacianSpectrum& spectrum,
                                             double tau, int i, int j);

enum class GraphFamily { kComplete, kStar };

// kPrinted evaluates the reference closed forms:
//   complete: 2 e^{-tau n}
//   star:     e^{-2 tau n} + ((e^{-tau n} - e^{-tau})/(n-1))^2
//             + ((e^{-tau n} - e^{-tau})/(n-1) + e^{-tau})^2
// kExact evaluates the squared hub-to-leaf (star) or any-pair (complete)
// column distance of e^{-tau L} derived from its spectral projectors:
//   complete: 2 e^{-2 tau n}
//   star:     e^{-2 tau n} + (n-2) ((e^{-tau} - e^{-tau n})/(n-1))^2
//             + (((n-2) e^{-tau} + e^{-tau n})/(n-1))^2
enum class ClosedFormVariant { kPrinted, kExact };

absl::StatusOr<double> ClosedFormGraphDelta2Sq(
    GraphFamily family, int n, double tau,
    ClosedFormVariant variant = ClosedFormVariant::kPrinted);

}  // namespace heatcloak

#endif  // HEATCLOAK_PRIVACY_H_
