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

#include "heatcloak/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "Eigen/SVD"
#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "heatcloak/random.h"

namespace heatcloak {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

absl::Status CheckQuantum(const NoiseOptions& options) {
  const double q = options.quantum;
  int exponent = 0;
  if (!(q > 0.0) || std::frexp(q, &exponent) != 0.5) {
    return absl::InvalidArgumentError(
        absl::StrFormat("noise quantum %g must be a positive power of two", q));
  }
  return absl::OkStatus();
}

double Snap(double v, double quantum) {
  return std::nearbyint(v / quantum) * quantum;
}

// Largest hop distance between two locations in the graph formed by the
// neighbour pairs; infinite when it is disconnected.
double HopDiameter(int n, absl::Span<const NeighbourPair> pairs) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j] : pairs) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  int diameter = 0;
  for (int src = 0; src < n; ++src) {
    std::vector<int> dist(n, -1);
    std::queue<int> frontier;
    dist[src] = 0;
    frontier.push(src);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v : adj[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          frontier.push(v);
        }
      }
    }
    for (int d : dist) {
      if (d < 0) return kInf;
      diameter = std::max(diameter, d);
    }
  }
  return diameter;
}

}  // namespace

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    double delta,
                                                    double alpha) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("InvalidParams: epsilon = %g must be positive", epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("InvalidParams: delta = %g must lie in (0,1)", delta));
  }
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("InvalidParams: alpha = %g must be positive", alpha));
  }
  return PrivacyParams{epsilon, delta, alpha};
}

double NoiseMultiplierValue(NoiseMultiplier multiplier, double delta) {
  const double log_term = std::log(1.25 / delta);
  return multiplier == NoiseMultiplier::kPrinted ? 2.0 * log_term
                                                 : std::sqrt(2.0 * log_term);
}

absl::StatusOr<NoiseMultiplier> ParseNoiseMultiplier(const std::string& name) {
  if (name == "printed") return NoiseMultiplier::kPrinted;
  if (name == "standard") return NoiseMultiplier::kStandard;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown noise multiplier '%s' (printed|standard)", name));
}

std::string NoiseMultiplierName(NoiseMultiplier multiplier) {
  return multiplier == NoiseMultiplier::kPrinted ? "printed" : "standard";
}

absl::StatusOr<double> GaussianSigma(const PrivacyParams& params,
                                     double delta2,
                                     NoiseMultiplier multiplier) {
  absl::StatusOr<PrivacyParams> checked =
      PrivacyParams::Create(params.epsilon, params.delta, params.alpha);
  if (!checked.ok()) return checked.status();
  if (!(delta2 >= 0.0) || !std::isfinite(delta2)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("InvalidParams: sensitivity %g must be >= 0", delta2));
  }
  return NoiseMultiplierValue(multiplier, params.delta) * delta2 /
         params.epsilon;
}

std::vector<NeighbourPair> LineNeighbourPairs(int n) {
  std::vector<NeighbourPair> pairs;
  for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  return pairs;
}

std::vector<NeighbourPair> GraphNeighbourPairs(const Graph& g) {
  std::vector<NeighbourPair> pairs;
  for (int i = 0; i < g.num_nodes(); ++i) {
    for (int j = i + 1; j < g.num_nodes(); ++j) {
      if (g.weights()(i, j) > 0.0) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

absl::StatusOr<SensitivityReport> SensitivityGeneral(
    const Eigen::MatrixXd& m, absl::Span<const NeighbourPair> pairs,
    double alpha) {
  if (pairs.empty()) {
    return absl::InvalidArgumentError("EmptyPairs: no neighbour pairs given");
  }
  if (!(alpha > 0.0)) {
    return absl::InvalidArgumentError("InvalidParams: alpha must be positive");
  }
  SensitivityReport report;
  report.scale = alpha;
  report.pair_norms.reserve(pairs.size());
  double best = -1.0;
  for (const auto& [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= m.cols() || j >= m.cols()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "neighbour pair (%d,%d) outside %d columns", i, j, m.cols()));
    }
    const double norm = (m.col(i) - m.col(j)).norm();
    report.pair_norms.push_back(norm);
    if (norm > best) {
      best = norm;
      report.argmax_pair = {i, j};
    }
  }
  report.delta2 = alpha * best;
  return report;
}

absl::StatusOr<SensitivityReport> SensitivityLine(const DiffusionOperator& op,
                                                  double alpha,
                                                  LineNeighbourScale scale) {
  const int n = op.num_sources();
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("TooFewSources: need n >= 2, got %d", n));
  }
  const std::vector<NeighbourPair> pairs = LineNeighbourPairs(n);
  const double factor =
      scale == LineNeighbourScale::kEmdRadius ? alpha * n : alpha;
  return SensitivityGeneral(op.matrix, pairs, factor);
}

Eigen::VectorXd SnapToQuantum(const Eigen::VectorXd& y,
                              const NoiseOptions& options) {
  return y.unaryExpr([q = options.quantum](double v) { return Snap(v, q); });
}

absl::StatusOr<Eigen::VectorXd> SeededNoise(int length, double sigma,
                                            uint64_t seed,
                                            const NoiseOptions& options) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sigma = %g must be finite and >= 0", sigma));
  }
  if (absl::Status s = CheckQuantum(options); !s.ok()) return s;
  Eigen::VectorXd noise(length);
  for (int i = 0; i < length; ++i) {
    noise(i) = Snap(sigma * CounterGaussian(seed, static_cast<uint64_t>(i)),
                    options.quantum);
  }
  return noise;
}

absl::StatusOr<Eigen::VectorXd> Privatize(const Eigen::VectorXd& y,
                                          double sigma, uint64_t seed,
                                          const NoiseOptions& options) {
  absl::StatusOr<Eigen::VectorXd> noise =
      SeededNoise(static_cast<int>(y.size()), sigma, seed, options);
  if (!noise.ok()) return noise.status();
  if (sigma == 0.0) return y;
  const double limit = std::ldexp(options.quantum, 52);
  Eigen::VectorXd snapped = SnapToQuantum(y, options);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y(i)) || std::abs(snapped(i)) >= limit ||
        std::abs((*noise)(i)) >= limit) {
      return absl::OutOfRangeError(absl::StrFormat(
          "OutOfRange: entry %d (%g) too large for noise quantum %g", i, y(i),
          options.quantum));
    }
  }
  return Eigen::VectorXd(snapped + *noise);
}

absl::StatusOr<Eigen::VectorXd> DenoiseBackdoor(const Eigen::VectorXd& y_tilde,
                                                double sigma, uint64_t seed,
                                                const NoiseOptions& options) {
  absl::StatusOr<Eigen::VectorXd> noise =
      SeededNoise(static_cast<int>(y_tilde.size()), sigma, seed, options);
  if (!noise.ok()) return noise.status();
  if (sigma == 0.0) return y_tilde;
  return Eigen::VectorXd(y_tilde - *noise);
}

absl::StatusOr<SpectralDiagnostics> ComputeSpectralDiagnostics(
    const Eigen::MatrixXd& m, absl::Span<const NeighbourPair> pairs,
    double alpha) {
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) {
    return absl::InvalidArgumentError("ZeroMatrix: diagnostics need M != 0");
  }
  absl::StatusOr<SensitivityReport> sensitivity =
      SensitivityGeneral(m, pairs, alpha);
  if (!sensitivity.ok()) return sensitivity.status();

  SpectralDiagnostics diag;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  diag.singular_values = svd.singularValues();
  const Eigen::VectorXd& s = diag.singular_values;
  const double s_max = s(0);
  const double rank_tol = s_max * std::max(m.rows(), m.cols()) *
                          std::numeric_limits<double>::epsilon();
  double s_min_nonzero = s_max;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > rank_tol) s_min_nonzero = s(i);
  }
  diag.kappa2 = s_max / s_min_nonzero;
  const double s_last = s(s.size() - 1);
  diag.kappa2_full = s_last > rank_tol ? s_max / s_last : kInf;

  Eigen::MatrixXd unit = m;
  for (Eigen::Index j = 0; j < unit.cols(); ++j) {
    const double norm = unit.col(j).norm();
    if (norm > 0.0) unit.col(j) /= norm;
  }
  const Eigen::MatrixXd gram = unit.transpose() * unit;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < gram.cols(); ++j) {
      diag.coherence_mu = std::max(diag.coherence_mu, std::abs(gram(i, j)));
    }
  }
  diag.coherence_mu = std::min(diag.coherence_mu, 1.0);

  const double nu = sensitivity->delta2;
  diag.delta2 = nu;
  diag.source_diameter = HopDiameter(static_cast<int>(m.cols()), pairs);
  const double n = static_cast<double>(m.cols());
  const double rho = diag.source_diameter;

  BoundCheck ill;
  ill.name = "ill_conditioned";
  ill.lhs = nu / s_max;  // sensitivity of M rescaled to unit spectral norm
  ill.rhs = std::isinf(diag.kappa2_full) ? 0.0 : alpha / diag.kappa2_full;
  ill.applicable = m.rows() >= m.cols();
  ill.holds = ill.lhs >= ill.rhs - 1e-9;
  diag.lemma_bounds.push_back(ill);

  BoundCheck gap;
  gap.name = "column_norm_gap";
  for (const auto& [i, j] : pairs) {
    gap.lhs = std::max(gap.lhs, std::abs(m.col(i).norm() - m.col(j).norm()));
  }
  gap.rhs = nu / alpha;
  gap.holds = gap.lhs <= gap.rhs + 1e-12 * std::max(1.0, gap.rhs);
  diag.lemma_bounds.push_back(gap);

  const double tail = s.sum() - s_max;
  BoundCheck stated;
  stated.name = "tail_spectrum_stated";
  stated.lhs = tail;
  stated.rhs = std::pow(n + 1.0, 1.5) * rho * nu / alpha;
  stated.holds = tail <= stated.rhs + 1e-12 * std::max(1.0, s_max);
  diag.lemma_bounds.push_back(stated);

  BoundCheck proof;
  proof.name = "tail_spectrum_proof";
  proof.lhs = tail;
  proof.rhs = (std::sqrt(static_cast<double>(std::min(m.rows(), m.cols()))) +
               1.0) *
              rho * (n - 1.0) * nu / alpha;
  proof.holds = tail <= proof.rhs + 1e-12 * std::max(1.0, s_max);
  diag.lemma_bounds.push_back(proof);
  return diag;
}

absl::StatusOr<double> GraphSensitivityBound(const LaplacianSpectrum& spectrum,
                                             double tau, int i, int j) {
  const Eigen::MatrixXd& u = spectrum.eigenvectors;
  const int n = static_cast<int>(u.rows());
  if (i < 0 || j < 0 || i >= n || j >= n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("node pair (%d,%d) outside %d nodes", i, j, n));
  }
  if (!(tau > 0.0)) {
    return absl::InvalidArgumentError("InvalidTime: tau must be positive");
  }
  if (n > 1 && !(spectrum.eigenvalues(1) > 0.0)) {
    return absl::FailedPreconditionError(
        "Disconnected: algebraic connectivity is zero");
  }
  double bound = 0.0;
  // Index 0 is the constant eigenvector, whose rows are all equal.
  for (int k = 1; k < n; ++k) {
    bound += std::exp(-tau * spectrum.eigenvalues(k)) * std::abs(u(i, k) - u(j, k));
  }
  return bound;
}

absl::StatusOr<double> GraphSensitivityBound(const Graph& g, double tau, int i,
                                             int j) {
  if (!g.IsConnected()) {
    return absl::FailedPreconditionError("Disconnected: graph is not connected");
  }
  absl::StatusOr<LaplacianSpectrum> spectrum = ComputeLaplacianSpectrum(g);
  if (!spectrum.ok()) return spectrum.status();
  return GraphSensitivityBound(*spectrum, tau, i, j);
}

absl::StatusOr<double> ClosedFormGraphDelta2Sq(GraphFamily family, int n,
                                               double tau,
                                               ClosedFormVariant variant) {
  if (n < 3) {
    return absl::InvalidArgumentError(
        absl::StrFormat("closed forms need n >= 3, got %d", n));
  }
  if (!(tau > 0.0)) {
    return absl::InvalidArgumentError("InvalidTime: tau must be positive");
  }
  const double nn = static_cast<double>(n);
  const double fast = std::exp(-tau * nn);
  const double slow = std::exp(-tau);
  if (family == GraphFamily::kComplete) {
    return variant == ClosedFormVariant::kPrinted ? 2.0 * fast
                                                  : 2.0 * fast * fast;
  }
  if (variant == ClosedFormVariant::kPrinted) {
    const double d = (fast - slow) / (nn - 1.0);
    return fast * fast + d * d + (d + slow) * (d + slow);
  }
  const double other_leaf = (slow - fast) / (nn - 1.0);
  const double same_leaf = ((nn - 2.0) * slow + fast) / (nn - 1.0);
  return fast * fast + (nn - 2.0) * other_leaf * other_leaf +
         same_leaf * same_leaf;
}

}  // namespace heatcloak
