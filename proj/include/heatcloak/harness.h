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

// Experiment orchestration: single trials of the private recovery pipeline
// on the unit interval, parameter sweeps with confidence intervals, and the
// graph community demo.

#ifndef HEATCLOAK_HARNESS_H_
#define HEATCLOAK_HARNESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "heatcloak/privacy.h"
#include "heatcloak/recovery.h"

namespace heatcloak {

enum class SigmaMode { kFixed, kPrivate };
enum class SourcePlacement { kCenter, kUniformRandom, kFixed };

struct ExperimentConfig {
  int n = 100;
  int m = 50;
  double mu = 0.5;
  double t = 1.0;  // T = mu * t = 0.5

  SigmaMode sigma_mode = SigmaMode::kFixed;
  double sigma = 0.1;  // kFixed only
  double epsilon = 4.0;
  double delta = 0.1;
  double alpha = 1.0;
  NoiseMultiplier multiplier = NoiseMultiplier::kPrinted;
  LineNeighbourScale neighbour_scale = LineNeighbourScale::kGridStep;

  int k = 1;
  SourcePlacement placement = SourcePlacement::kCenter;
  std::vector<double> locations;  // kFixed only

  int trials = 10;
  std::string sweep_var = "sigma";
  std::vector<double> sweep_values = {0.1};

  double rho = 0.0;  // radius = (1 + rho) sigma sqrt(m)
  // When the radius is below the distance from the private measurements to
  // the image of the box, retry with the smallest radius that is feasible.
  bool widen_infeasible = true;
  double ci_factor = 1.96;
  uint64_t seed = 1;
  SolverTolerances solver;

  double EffectiveTime() const { return mu * t; }
  absl::Status Validate() const;
  // Copy with one sweep variable set to `value`.
  absl::StatusOr<ExperimentConfig> With(const std::string& var,
                                        double value) const;
};

struct TrialRecord {
  std::string sweep_var;
  double sweep_value = 0.0;
  int trial = 0;
  uint64_t seed = 0;
  int n = 0;
  int m = 0;
  double mu = 0.0;
  double t = 0.0;
  double T = 0.0;
  int k = 0;
  SigmaMode sigma_mode = SigmaMode::kFixed;
  double epsilon = 0.0;
  double delta = 0.0;
  double alpha = 0.0;
  double delta2 = 0.0;
  double sigma_used = 0.0;
  double radius = 0.0;
  double emd_error = 0.0;
  double l2_error = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;
  bool radius_widened = false;
  double wall_ms = 0.0;

  // Everything except wall_ms.
  bool SameOutcome(const TrialRecord& other) const;
};

// Seed of trial `index` under `master_seed`. Depends only on the pair, so
// adding trials never changes earlier ones.
uint64_t TrialSeed(uint64_t master_seed, int index);

// Builds the operator, places sources, forwards, computes Delta2 exactly,
// derives sigma, privatises, recovers with radius (1+rho) sigma sqrt(m) and
// scores the normalised EMD. Deterministic in (config, seed).
absl::StatusOr<TrialRecord> RunTrial(const ExperimentConfig& config,
                                     uint64_t seed, int trial_index = 0);

// Source vector placed by RunTrial for `seed`.
absl::StatusOr<Eigen::VectorXd> PlaceSources(const ExperimentConfig& config,
                                             uint64_t seed);

struct SweepSummary {
  double sweep_value = 0.0;
  double mean_emd = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double mean_delta2 = 0.0;
  bool ci_degenerate = false;  // a single trial gives a zero-width interval

  double HalfWidth() const { return 0.5 * (ci_hi - ci_lo); }
};

struct SweepResult {
  std::vector<TrialRecord> records;  // sorted by (sweep_value, seed)
  std::vector<SweepSummary> summary;  // sorted by sweep_value
};

// Sweep variables: n, m, t, sigma, epsilon, delta.
absl::StatusOr<SweepResult> RunSweep(const ExperimentConfig& config);

SweepSummary Summarize(double sweep_value, const std::vector<double>& errors,
                       const std::vector<double>& delta2s, double ci_factor);

struct GraphDemoConfig {
  int n = 500;
  int communities = 2;
  double p_in = 0.05;
  double p_out = 0.001;
  double tau = 2.0;
  double epsilon = 4.0;
  double delta = 0.1;
  double alpha = 1.0;
  NoiseMultiplier multiplier = NoiseMultiplier::kPrinted;
  double rho = 0.0;
  bool widen_infeasible = true;
  int max_resamples = 20;
  uint64_t seed = 1;
  SolverTolerances solver;
};

struct GraphDemoReport {
  int attempts = 0;
  int source_node = 0;
  int true_community = 0;
  int recovered_community = 0;
  double delta2 = 0.0;
  double sigma = 0.0;
  double radius = 0.0;
  bool radius_widened = false;
  double true_community_mass_fraction = 0.0;
  bool correct_community = false;
  double emd_error = 1.0;       // hop-metric EMD of normalised vectors
  bool flat_diffusion = false;  // e^{-tau L} indistinguishable from 11^T/n
  bool degenerate = false;
  RecoveryResult recovery;
};

// Samples a connected SBM graph (resampling up to max_resamples times),
// plants a unit source at a random node, diffuses, privatises with Delta2
// over graph-adjacent pairs, recovers with BPD, and checks whether most of
// the recovered mass lies in the source's community. Error
// "DisconnectedAfterRetries" when no connected sample is found.
absl::StatusOr<GraphDemoReport> RunGraphDemo(const GraphDemoConfig& config);

std::string SigmaModeName(SigmaMode mode);

}  // namespace heatcloak

#endif  // HEATCLOAK_HARNESS_H_
