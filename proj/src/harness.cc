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

#include "heatcloak/harness.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>

#include "absl/strings/str_format.h"
#include "heatcloak/diffusion.h"
#include "heatcloak/emd.h"
#include "heatcloak/graph.h"
#include "heatcloak/internal/status_macros.h"
#include "heatcloak/random.h"

namespace heatcloak {
namespace {

// Stream tags for seeds derived from a trial seed.
constexpr uint64_t kPlacementStream = 0x706c616365ULL;
constexpr uint64_t kNoiseStream = 0x6e6f697365ULL;
constexpr uint64_t kGraphStream = 0x6772617068ULL;
constexpr uint64_t kTrialStream = 0x747269616cULL;

struct Recovery {
  RecoveryResult result;
  double radius = 0.0;
  bool widened = false;
};

absl::StatusOr<Recovery> RecoverWithFallback(const Eigen::MatrixXd& matrix,
                                             const Eigen::VectorXd& y_tilde,
                                             double radius, bool widen,
                                             const SolverTolerances& tol) {
  ASSIGN_OR_RETURN(RecoveryProblem problem,
                   RecoveryProblem::Create(matrix, y_tilde, radius));
  absl::StatusOr<RecoveryResult> result = BpdSolve(problem, tol);
  if (result.ok()) return Recovery{*std::move(result), radius, false};
  if (!widen || !absl::IsFailedPrecondition(result.status())) {
    return result.status();
  }
  const BoxResidual closest =
      MinimizeBoxResidual(matrix, y_tilde, 0.0, tol.max_iterations);
  problem.radius = closest.upper * (1.0 + 1e-2);
  ASSIGN_OR_RETURN(RecoveryResult widened, BpdSolve(problem, tol));
  return Recovery{std::move(widened), problem.radius, true};
}

int NearestGridIndex(double location, int n) {
  const long j = std::lround(location * n) - 1;
  return static_cast<int>(std::clamp<long>(j, 0, n - 1));
}

}  // namespace

std::string SigmaModeName(SigmaMode mode) {
  return mode == SigmaMode::kFixed ? "fixed" : "private";
}

absl::Status ExperimentConfig::Validate() const {
  if (n < 2 || m < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need n >= 2 and m >= 1, got n=%d m=%d", n, m));
  }
  if (!(mu > 0.0) || !(t > 0.0)) {
    return absl::InvalidArgumentError("mu and t must be positive");
  }
  if (sigma_mode == SigmaMode::kFixed && !(sigma >= 0.0)) {
    return absl::InvalidArgumentError("sigma must be >= 0");
  }
  if (sigma_mode == SigmaMode::kPrivate) {
    RETURN_IF_ERROR(PrivacyParams::Create(epsilon, delta, alpha).status());
  }
  if (k < 1 || k > n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need 1 <= k <= n, got k=%d", k));
  }
  if (placement == SourcePlacement::kCenter && k != 1) {
    return absl::InvalidArgumentError("center placement requires k = 1");
  }
  if (placement == SourcePlacement::kFixed) {
    if (static_cast<int>(locations.size()) != k) {
      return absl::InvalidArgumentError(
          "fixed placement needs exactly k locations");
    }
    for (double x : locations) {
      if (!(x > 0.0 && x <= 1.0)) {
        return absl::InvalidArgumentError("source locations must lie in (0,1]");
      }
    }
  }
  if (trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (!(rho >= 0.0)) return absl::InvalidArgumentError("rho must be >= 0");
  if (sweep_values.empty()) {
    return absl::InvalidArgumentError("sweep needs at least one value");
  }
  static const std::vector<std::string> kVars = {"n",     "m",       "t",
                                                 "sigma", "epsilon", "delta"};
  if (std::find(kVars.begin(), kVars.end(), sweep_var) == kVars.end()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "unknown sweep variable '%s' (n, m, t, sigma, epsilon, delta)",
        sweep_var));
  }
  if (sweep_var == "sigma" && sigma_mode != SigmaMode::kFixed) {
    return absl::InvalidArgumentError("sigma sweeps need sigma_mode=fixed");
  }
  if ((sweep_var == "epsilon" || sweep_var == "delta") &&
      sigma_mode != SigmaMode::kPrivate) {
    return absl::InvalidArgumentError(
        "epsilon/delta sweeps need sigma_mode=private");
  }
  return absl::OkStatus();
}

absl::StatusOr<ExperimentConfig> ExperimentConfig::With(const std::string& var,
                                                        double value) const {
  ExperimentConfig out = *this;
  if (var == "n") {
    out.n = static_cast<int>(std::lround(value));
  } else if (var == "m") {
    out.m = static_cast<int>(std::lround(value));
  } else if (var == "t") {
    out.t = value;
  } else if (var == "sigma") {
    out.sigma = value;
  } else if (var == "epsilon") {
    out.epsilon = value;
  } else if (var == "delta") {
    out.delta = value;
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown sweep variable '%s'", var));
  }
  return out;
}

bool TrialRecord::SameOutcome(const TrialRecord& o) const {
  return sweep_var == o.sweep_var && sweep_value == o.sweep_value &&
         trial == o.trial && seed == o.seed && n == o.n && m == o.m &&
         mu == o.mu && t == o.t && T == o.T && k == o.k &&
         sigma_mode == o.sigma_mode && epsilon == o.epsilon &&
         delta == o.delta && alpha == o.alpha && delta2 == o.delta2 &&
         sigma_used == o.sigma_used && radius == o.radius &&
         emd_error == o.emd_error && l2_error == o.l2_error &&
         iterations == o.iterations && converged == o.converged &&
         degenerate == o.degenerate && radius_widened == o.radius_widened;
}

uint64_t TrialSeed(uint64_t master_seed, int index) {
  return CounterHash(master_seed, kTrialStream, static_cast<uint64_t>(index));
}

absl::StatusOr<Eigen::VectorXd> PlaceSources(const ExperimentConfig& config,
                                             uint64_t seed) {
  const int n = config.n;
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  switch (config.placement) {
    case SourcePlacement::kCenter:
      f(NearestGridIndex(0.5, n)) = 1.0;
      break;
    case SourcePlacement::kFixed:
      for (double x : config.locations) f(NearestGridIndex(x, n)) = 1.0;
      break;
    case SourcePlacement::kUniformRandom: {
      // Partial Fisher-Yates: k distinct grid points.
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      for (int i = 0; i < config.k; ++i) {
        const double u = CounterUniform(seed, kPlacementStream,
                                        static_cast<uint64_t>(i));
        const int j = i + static_cast<int>(u * (n - i));
        std::swap(order[i], order[std::min(j, n - 1)]);
        f(order[i]) = 1.0;
      }
      break;
    }
  }
  return f;
}

absl::StatusOr<TrialRecord> RunTrial(const ExperimentConfig& config,
                                     uint64_t seed, int trial_index) {
  RETURN_IF_ERROR(config.Validate());
  const auto start = std::chrono::steady_clock::now();

  ASSIGN_OR_RETURN(DiffusionOperator op,
                   HeatKernelMatrix(config.n, config.m, config.mu, config.t));
  ASSIGN_OR_RETURN(Eigen::VectorXd f0, PlaceSources(config, seed));
  const Eigen::VectorXd y = op.matrix * f0;
  ASSIGN_OR_RETURN(SensitivityReport sensitivity,
                   SensitivityLine(op, config.alpha, config.neighbour_scale));

  double sigma = config.sigma;
  if (config.sigma_mode == SigmaMode::kPrivate) {
    ASSIGN_OR_RETURN(PrivacyParams params,
                     PrivacyParams::Create(config.epsilon, config.delta,
                                           config.alpha));
    ASSIGN_OR_RETURN(sigma, GaussianSigma(params, sensitivity.delta2,
                                          config.multiplier));
  }
  ASSIGN_OR_RETURN(Eigen::VectorXd y_tilde,
                   Privatize(y, sigma, CounterHash(seed, kNoiseStream)));
  const double radius = FeasibilityRadius(sigma, config.m, config.rho);
  ASSIGN_OR_RETURN(Recovery recovery,
                   RecoverWithFallback(op.matrix, y_tilde, radius,
                                       config.widen_infeasible, config.solver));

  TrialRecord rec;
  rec.sweep_var = config.sweep_var;
  rec.trial = trial_index;
  rec.seed = seed;
  rec.n = config.n;
  rec.m = config.m;
  rec.mu = config.mu;
  rec.t = config.t;
  rec.T = config.EffectiveTime();
  rec.k = config.k;
  rec.sigma_mode = config.sigma_mode;
  rec.epsilon = config.epsilon;
  rec.delta = config.delta;
  rec.alpha = config.alpha;
  rec.delta2 = sensitivity.delta2;
  rec.sigma_used = sigma;
  rec.radius = recovery.radius;
  rec.radius_widened = recovery.widened;
  rec.iterations = recovery.result.iterations;
  rec.converged = recovery.result.converged;
  rec.degenerate = recovery.result.degenerate;
  rec.l2_error = (f0 - recovery.result.estimate).norm();
  if (rec.degenerate) {
    rec.emd_error = 1.0;
  } else {
    ASSIGN_OR_RETURN(SourceVector truth, SourceVector::OnUnitInterval(f0));
    ASSIGN_OR_RETURN(SourceVector estimate, SourceVector::OnUnitInterval(
                                                recovery.result.estimate));
    ASSIGN_OR_RETURN(SourceVector p, NormalizeL1(truth));
    ASSIGN_OR_RETURN(SourceVector q, NormalizeL1(estimate));
    ASSIGN_OR_RETURN(rec.emd_error, EmdLine(p, q));
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return rec;
}

SweepSummary Summarize(double sweep_value, const std::vector<double>& errors,
                       const std::vector<double>& delta2s, double ci_factor) {
  SweepSummary s;
  s.sweep_value = sweep_value;
  const double count = static_cast<double>(errors.size());
  s.mean_emd = std::accumulate(errors.begin(), errors.end(), 0.0) / count;
  s.mean_delta2 = std::accumulate(delta2s.begin(), delta2s.end(), 0.0) /
                  static_cast<double>(delta2s.size());
  double half_width = 0.0;
  if (errors.size() > 1) {
    double ss = 0.0;
    for (double e : errors) ss += (e - s.mean_emd) * (e - s.mean_emd);
    const double sd = std::sqrt(ss / (count - 1.0));
    half_width = ci_factor * sd / std::sqrt(count);
  } else {
    s.ci_degenerate = true;
  }
  s.ci_lo = s.mean_emd - half_width;
  s.ci_hi = s.mean_emd + half_width;
  return s;
}

absl::StatusOr<SweepResult> RunSweep(const ExperimentConfig& config) {
  RETURN_IF_ERROR(config.Validate());
  std::vector<double> values = config.sweep_values;
  std::sort(values.begin(), values.end());
  SweepResult out;
  for (double value : values) {
    ASSIGN_OR_RETURN(ExperimentConfig point, config.With(config.sweep_var, value));
    RETURN_IF_ERROR(point.Validate());
    std::vector<TrialRecord> batch;
    std::vector<double> errors;
    std::vector<double> delta2s;
    for (int trial = 0; trial < config.trials; ++trial) {
      ASSIGN_OR_RETURN(TrialRecord rec,
                       RunTrial(point, TrialSeed(config.seed, trial), trial));
      rec.sweep_value = value;
      errors.push_back(rec.emd_error);
      delta2s.push_back(rec.delta2);
      batch.push_back(std::move(rec));
    }
    std::sort(batch.begin(), batch.end(),
              [](const TrialRecord& a, const TrialRecord& b) {
                return a.seed < b.seed;
              });
    out.summary.push_back(Summarize(value, errors, delta2s, config.ci_factor));
    for (auto& rec : batch) out.records.push_back(std::move(rec));
  }
  return out;
}

absl::StatusOr<GraphDemoReport> RunGraphDemo(const GraphDemoConfig& config) {
  if (!(config.tau > 0.0)) {
    return absl::InvalidArgumentError("InvalidTime: tau must be positive");
  }
  ASSIGN_OR_RETURN(PrivacyParams params,
                   PrivacyParams::Create(config.epsilon, config.delta,
                                         config.alpha));
  GraphDemoReport report;
  std::optional<SbmGraph> sample;
  for (int attempt = 0; attempt < config.max_resamples; ++attempt) {
    ASSIGN_OR_RETURN(
        SbmGraph candidate,
        SbmSample(config.n, config.communities, config.p_in, config.p_out,
                  CounterHash(config.seed, kGraphStream,
                              static_cast<uint64_t>(attempt))));
    report.attempts = attempt + 1;
    if (candidate.connected) {
      sample = std::move(candidate);
      break;
    }
  }
  if (!sample.has_value()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "DisconnectedAfterRetries: no connected SBM sample in %d attempts",
        config.max_resamples));
  }
  const Graph& graph = sample->graph;
  const int n = graph.num_nodes();

  report.source_node = std::min(
      n - 1, static_cast<int>(CounterUniform(config.seed, kPlacementStream) * n));
  report.true_community = sample->community[report.source_node];
  Eigen::VectorXd f0 = Eigen::VectorXd::Zero(n);
  f0(report.source_node) = 1.0;

  ASSIGN_OR_RETURN(DiffusionOperator op,
                   GraphDiffusionOperator(graph, config.tau));
  report.flat_diffusion =
      (op.matrix.array() - 1.0 / n).abs().maxCoeff() < 1e-9;
  const std::vector<NeighbourPair> pairs = GraphNeighbourPairs(graph);
  ASSIGN_OR_RETURN(SensitivityReport sensitivity,
                   SensitivityGeneral(op.matrix, pairs, params.alpha));
  report.delta2 = sensitivity.delta2;
  ASSIGN_OR_RETURN(report.sigma, GaussianSigma(params, sensitivity.delta2,
                                               config.multiplier));
  ASSIGN_OR_RETURN(Eigen::VectorXd y_tilde,
                   Privatize(op.matrix * f0, report.sigma,
                             CounterHash(config.seed, kNoiseStream)));
  const double radius = FeasibilityRadius(report.sigma, n, config.rho);
  ASSIGN_OR_RETURN(Recovery recovery,
                   RecoverWithFallback(op.matrix, y_tilde, radius,
                                       config.widen_infeasible, config.solver));
  report.radius = recovery.radius;
  report.radius_widened = recovery.widened;
  report.recovery = recovery.result;

  const Eigen::VectorXd& estimate = recovery.result.estimate;
  std::vector<double> mass(config.communities, 0.0);
  for (int i = 0; i < n; ++i) mass[sample->community[i]] += estimate(i);
  const double total = estimate.sum();
  report.degenerate = recovery.result.degenerate || report.flat_diffusion;
  if (total > 0.0) {
    report.recovered_community = static_cast<int>(
        std::max_element(mass.begin(), mass.end()) - mass.begin());
    report.true_community_mass_fraction = mass[report.true_community] / total;
    ASSIGN_OR_RETURN(GroundMetric metric, ShortestPathMetric(graph));
    ASSIGN_OR_RETURN(SourceVector truth, SourceVector::OnNodes(f0));
    ASSIGN_OR_RETURN(SourceVector est, SourceVector::OnNodes(estimate));
    ASSIGN_OR_RETURN(SourceVector p, NormalizeL1(truth));
    ASSIGN_OR_RETURN(SourceVector q, NormalizeL1(est));
    ASSIGN_OR_RETURN(EmdSolution emd, EmdFlow(p, q, metric));
    report.emd_error = emd.cost;
  }
  report.correct_community = !report.degenerate &&
                             report.true_community_mass_fraction > 0.5;
  return report;
}

}  // namespace heatcloak
