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

// Acceptance gate. Prints one PASS/FAIL line per criterion; with
// --criterion=<name> runs only that one. Exit status is nonzero when any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numeric>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "Eigen/Core"
#include "Eigen/SVD"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "heatcloak/bounds.h"
#include "heatcloak/diffusion.h"
#include "heatcloak/emd.h"
#include "heatcloak/experiment_io.h"
#include "heatcloak/graph.h"
#include "heatcloak/harness.h"
#include "heatcloak/privacy.h"
#include "heatcloak/random.h"
#include "heatcloak/recovery.h"

namespace heatcloak {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::string title;
  std::function<Outcome()> run;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Outcome Error(const absl::Status& status) {
  return {false, absl::StrFormat("error: %s", status.ToString())};
}

SourceVector RandomDistribution(int n, uint64_t seed, uint64_t stream) {
  Eigen::VectorXd w(n);
  for (int j = 0; j < n; ++j) {
    // A third of the entries are zero so supports differ.
    const double u = CounterUniform(seed, stream, j);
    w(j) = CounterUniform(seed, stream + 100, j) < 1.0 / 3 ? 0.0 : u;
  }
  if (w.sum() == 0.0) w(0) = 1.0;
  w /= w.sum();
  return *SourceVector::OnUnitInterval(w);
}

Outcome EmdOracle() {
  Stopwatch clock;
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 19;
    const SourceVector p = RandomDistribution(n, k, 1);
    const SourceVector q = RandomDistribution(n, k, 2);
    absl::StatusOr<double> line = EmdLine(p, q);
    if (!line.ok()) return Error(line.status());
    absl::StatusOr<EmdSolution> flow = EmdFlow(p, q, GroundMetric::OnLine(p.grid));
    if (!flow.ok()) return Error(flow.status());
    worst = std::max(worst, std::abs(*line - flow->cost));
  }
  const double secs = clock.Seconds();
  return {worst <= 1e-7 && secs < 10.0,
          absl::StrFormat("200 pairs, max |line - flow| = %.3g (tol 1e-7), %.2f s",
                          worst, secs)};
}

double MaxEdgeDelta2Sq(const Graph& g, double tau) {
  const Eigen::MatrixXd e = GraphDiffusionOperator(g, tau)->matrix;
  double best = 0.0;
  for (const auto& [i, j] : GraphNeighbourPairs(g)) {
    best = std::max(best, (e.col(i) - e.col(j)).squaredNorm());
  }
  return best;
}

Outcome GraphClosedForms() {
  Stopwatch clock;
  double worst_printed = 0.0, worst_exact = 0.0;
  for (int n : {3, 5, 10}) {
    for (double tau : {0.1, 0.5, 1.0}) {
      const double numeric = MaxEdgeDelta2Sq(CompleteGraph(n), tau);
      worst_printed = std::max(
          worst_printed,
          std::abs(numeric - *ClosedFormGraphDelta2Sq(GraphFamily::kComplete, n, tau)));
      worst_exact = std::max(
          worst_exact,
          std::abs(numeric - *ClosedFormGraphDelta2Sq(GraphFamily::kComplete, n, tau,
                                                      ClosedFormVariant::kExact)));
    }
  }
  double star_printed = 0.0, star_exact = 0.0;
  for (int n : {3, 5, 10}) {
    for (double tau : {0.1, 0.5, 1.0}) {
      const double numeric = MaxEdgeDelta2Sq(StarGraph(n), tau);
      star_printed = std::max(
          star_printed,
          std::abs(numeric - *ClosedFormGraphDelta2Sq(GraphFamily::kStar, n, tau)));
      star_exact = std::max(
          star_exact, std::abs(numeric - *ClosedFormGraphDelta2Sq(
                                             GraphFamily::kStar, n, tau,
                                             ClosedFormVariant::kExact)));
    }
  }
  const double secs = clock.Seconds();
  return {worst_printed <= 1e-8 && secs < 5.0,
          absl::StrFormat(
              "K_n: max |numeric - 2e^{-tau n}| = %.3g (tol 1e-8); "
              "|numeric - 2e^{-2 tau n}| = %.3g; star: printed off by %.3g, "
              "exact form off by %.3g; %.2f s",
              worst_printed, worst_exact, star_printed, star_exact, secs)};
}

double LineDelta2(int n, int m, double t) {
  return SensitivityLine(*HeatKernelMatrix(n, m, 0.5, t), 1.0)->delta2;
}

// Least-squares slope of log delta2 against log T at n=1000, m=500.
double TSlope(std::initializer_list<double> ts) {
  std::vector<double> xs, ys;
  for (double t : ts) {
    xs.push_back(std::log(0.5 * t));
    ys.push_back(std::log(LineDelta2(1000, 500, t)));
  }
  const double xm = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double ym = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - xm) * (ys[i] - ym);
    sxx += (xs[i] - xm) * (xs[i] - xm);
  }
  return sxy / sxx;
}

Outcome SensitivityAsymptotics() {
  Stopwatch clock;
  std::vector<std::string> notes;
  bool ok = true;
  std::vector<double> m_ratios;
  for (int m : {125, 250, 500}) {
    m_ratios.push_back(LineDelta2(500, 2 * m, 0.1) / LineDelta2(500, m, 0.1));
  }
  for (double r : m_ratios) ok &= r >= 1.30 && r <= 1.53;
  notes.push_back(absl::StrFormat("m-doubling ratios %s in [1.30,1.53]",
                                  absl::StrJoin(m_ratios, "/", [](std::string* o, double r) {
                                    absl::StrAppendFormat(o, "%.4f", r);
                                  })));
  std::vector<double> n_ratios;
  for (int n : {125, 250, 500}) {
    n_ratios.push_back(LineDelta2(2 * n, 500, 0.1) / LineDelta2(n, 500, 0.1));
  }
  for (double r : n_ratios) ok &= r >= 0.46 && r <= 0.54;
  notes.push_back(absl::StrFormat("n-doubling ratios %s in [0.46,0.54]",
                                  absl::StrJoin(n_ratios, "/", [](std::string* o, double r) {
                                    absl::StrAppendFormat(o, "%.4f", r);
                                  })));
  const double slope = TSlope({0.05, 0.1, 0.2, 0.4});
  ok &= slope >= -1.7 && slope <= -1.3;
  notes.push_back(absl::StrFormat("T slope %.4f in [-1.7,-1.3] (small-T context: %.4f)", slope,
                                  TSlope({2e-4, 4e-4, 8e-4, 1.6e-3})));
  const double secs = clock.Seconds();
  ok &= secs < 120.0;
  notes.push_back(absl::StrFormat("%.2f s", secs));
  return {ok, absl::StrJoin(notes, "; ")};
}

Outcome GaussianMechanism() {
  const PrivacyParams p = *PrivacyParams::Create(4.0, 0.1);
  const double printed = *GaussianSigma(p, 1.0);
  const double standard = *GaussianSigma(p, 1.0, NoiseMultiplier::kStandard);
  const double expected_standard = std::sqrt(2.0 * std::log(12.5)) / 4.0;
  const bool ok = std::abs(printed - 1.2628643221) <= 1e-9 &&
                  std::abs(standard - expected_standard) <= 1e-15;
  return {ok, absl::StrFormat("printed %.12f (want 1.2628643221 +- 1e-9), "
                              "standard %.15f vs %.15f",
                              printed, standard, expected_standard)};
}

Outcome Backdoor() {
  const NoiseOptions options;
  int exact = 0;
  for (int k = 0; k < 1000; ++k) {
    const uint64_t seed = CounterHash(2026, k);
    const int len = 1 + static_cast<int>(CounterUniform(seed, 1) * 100);
    const double sigma = 5.0 * CounterUniform(seed, 2);
    Eigen::VectorXd y(len);
    for (int i = 0; i < len; ++i) y(i) = 20.0 * CounterUniform(seed, 3, i) - 10.0;
    // Releases live on the noise lattice.
    y = SnapToQuantum(y, options);
    absl::StatusOr<Eigen::VectorXd> noisy = Privatize(y, sigma, seed, options);
    if (!noisy.ok()) return Error(noisy.status());
    absl::StatusOr<Eigen::VectorXd> back = DenoiseBackdoor(*noisy, sigma, seed, options);
    if (!back.ok()) return Error(back.status());
    bool same = back->size() == y.size();
    for (int i = 0; same && i < len; ++i) {
      same = std::memcmp(&(*back)(i), &y(i), sizeof(double)) == 0;
    }
    exact += same;
  }
  return {exact == 1000,
          absl::StrFormat("%d/1000 round trips bit-exact (inputs on the 2^-40 "
                          "lattice)",
                          exact)};
}

Outcome Feasibility() {
  const ExperimentConfig c;
  const DiffusionOperator op = *HeatKernelMatrix(c.n, c.m, c.mu, c.t);
  const Eigen::VectorXd f0 = *PlaceSources(c, 0);
  const Eigen::VectorXd y = op.matrix * f0;
  int inside_slack = 0, inside_exact = 0;
  for (int k = 0; k < 200; ++k) {
    absl::StatusOr<Eigen::VectorXd> noisy = Privatize(y, c.sigma, TrialSeed(77, k));
    if (!noisy.ok()) return Error(noisy.status());
    const double residual = (y - *noisy).norm();
    inside_slack += residual <= FeasibilityRadius(c.sigma, c.m, 0.3);
    inside_exact += residual <= FeasibilityRadius(c.sigma, c.m, 0.0);
  }
  const double slack_rate = inside_slack / 200.0;
  const double exact_rate = inside_exact / 200.0;
  return {slack_rate >= 0.95 && exact_rate >= 0.40 && exact_rate <= 0.60,
          absl::StrFormat("rho=0.3: %.3f feasible (>= 0.95); rho=0: %.3f "
                          "(in [0.40,0.60])",
                          slack_rate, exact_rate)};
}

// Largest per-trial normalised EMD over 30 two-peak trials at master seed
// 1000 was 0.1159.
constexpr double kTwoPeakBand = 0.12;

Outcome TwoPeak() {
  Stopwatch clock;
  const ExperimentConfig c = *PresetConfig("two-peak");
  int pass = 0;
  std::vector<std::string> cells;
  for (int k = 0; k < 10; ++k) {
    absl::StatusOr<TrialRecord> r = RunTrial(c, TrialSeed(c.seed, k), k);
    if (!r.ok()) return Error(r.status());
    const bool ok = r->emd_error <= kTwoPeakBand && r->l2_error >= 3 * r->emd_error;
    pass += ok;
    cells.push_back(absl::StrFormat("%.3f/%.2f", r->emd_error, r->l2_error));
  }
  const double secs = clock.Seconds();
  return {pass >= 8 && secs < 60.0,
          absl::StrFormat("%d/10 seeds with emd <= %.2f and l2 >= 3 emd "
                          "(emd/l2: %s); %.1f s",
                          pass, kTwoPeakBand, absl::StrJoin(cells, " "), secs)};
}

std::string DescribeSummary(const std::vector<SweepSummary>& summary) {
  return absl::StrJoin(summary, " ", [](std::string* out, const SweepSummary& s) {
    absl::StrAppendFormat(out, "%g:%.4f+-%.4f", s.sweep_value, s.mean_emd,
                          s.HalfWidth());
  });
}

Outcome SigmaMonotone() {
  absl::StatusOr<SweepResult> r = RunSweep(*PresetConfig("nonprivate-sigma"));
  if (!r.ok()) return Error(r.status());
  bool ok = true;
  for (size_t i = 1; i < r->summary.size(); ++i) {
    const SweepSummary& a = r->summary[i - 1];
    const SweepSummary& b = r->summary[i];
    const bool overlap = b.ci_hi >= a.ci_lo && a.ci_hi >= b.ci_lo;
    ok &= b.mean_emd >= a.mean_emd || overlap;
  }
  return {ok, absl::StrFormat("sigma:mean+-halfwidth %s",
                              DescribeSummary(r->summary))};
}

Outcome PrivateTShape() {
  absl::StatusOr<SweepResult> r = RunSweep(*PresetConfig("private-t"));
  if (!r.ok()) return Error(r.status());
  const std::vector<SweepSummary>& s = r->summary;
  double mid_min = INFINITY;
  for (size_t i = 1; i + 1 < s.size(); ++i) mid_min = std::min(mid_min, s[i].mean_emd);
  const double low_gap = s.front().mean_emd - mid_min;
  const double high_gap = s.back().mean_emd - mid_min;
  const bool ok = low_gap > s.front().HalfWidth() && high_gap > s.back().HalfWidth();
  return {ok, absl::StrFormat(
                  "t:mean+-halfwidth %s; smallest-T excess %.4f vs %.4f, "
                  "largest-T excess %.4f vs %.4f",
                  DescribeSummary(s), low_gap, s.front().HalfWidth(), high_gap,
                  s.back().HalfWidth())};
}

Outcome LowerBoundArithmetic() {
  bool ok = *LowerBoundEmd(0.5, 0.1, 50) == 0.005;
  double worst_root = 0.0;
  for (double T : {0.01, 0.2, 0.5, 0.9}) {
    for (double sigma : {1e-4, 0.01, 0.1}) {
      const double base = *LowerBoundEmd(T, sigma, 30);
      ok &= *LowerBoundEmd(T, 2 * sigma, 30) == 2 * base;
      ok &= *LowerBoundEmd(T, 8 * sigma, 30) == 8 * base;
      ok &= *LowerBoundEmd(T, sigma, 120) == base / 2;
      for (int m : {1, 7, 50, 333, 1000}) {
        const double v = *LowerBoundEmd(T, sigma, m) * std::sqrt(m);
        const double ref = *LowerBoundEmd(T, sigma, 1);
        worst_root = std::max(worst_root, std::abs(v - ref) / ref);
      }
    }
  }
  ok &= worst_root <= 4 * std::numeric_limits<double>::epsilon();
  return {ok, absl::StrFormat("L(0.5,0.1,50) = %.17g; sigma-linearity and m->4m "
                              "halving exact; max rel. deviation of L*sqrt(m) "
                              "%.2g",
                              *LowerBoundEmd(0.5, 0.1, 50), worst_root)};
}

Outcome IllConditioning() {
  int holds = 0;
  double worst_margin = INFINITY;
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 9;
    const int m = n + (k / 9) % 4;
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) a(i, j) = 2.0 * CounterUniform(k, i, j) - 1.0;
    }
    a /= Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues()(0);
    absl::StatusOr<SpectralDiagnostics> d =
        ComputeSpectralDiagnostics(a, LineNeighbourPairs(n), 1.0);
    if (!d.ok()) return Error(d.status());
    const double margin = d->delta2 - 1.0 / d->kappa2;
    worst_margin = std::min(worst_margin, margin);
    holds += margin >= -1e-9;
  }
  Eigen::MatrixXd wide(1, 2);
  wide << 0.6, 0.8;
  const SpectralDiagnostics w =
      *ComputeSpectralDiagnostics(wide, LineNeighbourPairs(2), 1.0);
  return {holds == 100,
          absl::StrFormat("%d/100 tall matrices satisfy delta2 >= 1/kappa2 - 1e-9 "
                          "(worst margin %.3g); wide [0.6 0.8] gives %.3g < %.3g",
                          holds, worst_margin, w.delta2, 1.0 / w.kappa2)};
}

Outcome DoublyStochastic() {
  double worst_rows = 0.0, worst_semi = 0.0;
  int graphs = 0;
  for (uint64_t seed = 0; graphs < 50; ++seed) {
    const int n = 2 + static_cast<int>(CounterUniform(seed, 1) * 19);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (CounterUniform(seed, 2 + i, j) < 0.35) {
          w(i, j) = w(j, i) = 0.1 + 2.0 * CounterUniform(seed, 100 + i, j);
        }
      }
    }
    absl::StatusOr<Graph> g = GraphLaplacian(w);
    if (!g.ok()) return Error(g.status());
    if (!g->IsConnected()) continue;
    ++graphs;
    const double a = 0.05 + CounterUniform(seed, 3);
    const double b = 0.05 + CounterUniform(seed, 4);
    const Eigen::MatrixXd ea = GraphDiffusionOperator(*g, a)->matrix;
    const Eigen::MatrixXd eb = GraphDiffusionOperator(*g, b)->matrix;
    const Eigen::MatrixXd eab = GraphDiffusionOperator(*g, a + b)->matrix;
    worst_rows = std::max(worst_rows,
                          (ea.rowwise().sum().array() - 1.0).abs().maxCoeff());
    worst_semi = std::max(worst_semi, (ea * eb - eab).cwiseAbs().maxCoeff());
  }
  return {worst_rows <= 1e-9 && worst_semi <= 1e-8,
          absl::StrFormat("50 connected graphs: max |row sum - 1| = %.3g (tol "
                          "1e-9), max semigroup error = %.3g (tol 1e-8)",
                          worst_rows, worst_semi)};
}

struct DemoTally {
  int correct = 0;
  int degenerate = 0;
  int disconnected = 0;
};

DemoTally RunDemos(int n, double p_in, double p_out) {
  DemoTally tally;
  for (int seed = 1; seed <= 10; ++seed) {
    GraphDemoConfig g;
    g.n = n;
    g.p_in = p_in;
    g.p_out = p_out;
    g.seed = seed;
    absl::StatusOr<GraphDemoReport> r = RunGraphDemo(g);
    if (!r.ok()) {
      ++tally.disconnected;
      continue;
    }
    tally.correct += r->correct_community;
    tally.degenerate += r->degenerate;
  }
  return tally;
}

Outcome GraphCommunity() {
  Stopwatch clock;
  const DemoTally literal = RunDemos(100, 0.05, 0.001);
  const double literal_secs = clock.Seconds();
  // Same expected degrees as the 500-node graph.
  const DemoTally scaled = RunDemos(100, 0.25, 0.005);
  const DemoTally full = RunDemos(500, 0.05, 0.001);
  return {literal.correct >= 8 && literal_secs < 120.0,
          absl::StrFormat(
              "n=100 p=5%%/0.1%%: %d/10 correct (%d disconnected after retries, "
              "%d degenerate), %.1f s; context: n=100 p=25%%/0.5%%: %d/10 "
              "(%d degenerate); n=500 p=5%%/0.1%%: %d/10 (%d degenerate)",
              literal.correct, literal.disconnected, literal.degenerate,
              literal_secs, scaled.correct, scaled.degenerate, full.correct,
              full.degenerate)};
}

// scipy linprog table for a = 0.2, n = 100.
Outcome FanoPackingTable() {
  absl::StatusOr<FanoPacking> packing = MakeFanoPacking(0.2, 100);
  if (!packing.ok()) return Error(packing.status());
  Eigen::Matrix4d expected;
  expected << 0, 0.099999999999999978, 0.099999999999999992,
      0.099999999999999978, 0.099999999999999978, 0, 0.099999999999999992,
      0.099999999999999978, 0.099999999999999992, 0.099999999999999992, 0,
      0.099999999999999992, 0.099999999999999978, 0.099999999999999978,
      0.099999999999999992, 0;
  const double table_err = (packing->emd - expected).cwiseAbs().maxCoeff();
  const Eigen::MatrixXd a = HeatKernelMatrix(100, 50, 0.5, 1.0)->matrix;
  const double sigma = 0.1;
  double kl_err = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const Eigen::VectorXd d = a * (packing->members[i].weights -
                                     packing->members[j].weights);
      double sum = 0.0;
      for (int c = 0; c < d.size(); ++c) sum += d(c) * d(c) / (2 * sigma * sigma);
      kl_err = std::max(kl_err, std::abs(sum - *GaussianMeasurementKl(
                                                   a, packing->members[i],
                                                   packing->members[j], sigma)));
    }
  }
  return {table_err <= 1e-15 && kl_err <= 1e-9,
          absl::StrFormat("max |table - LP| = %.3g; max |KL - sum| = %.3g",
                          table_err, kl_err)};
}

std::vector<Criterion> AllCriteria() {
  return {
      {"emd_oracle", "EMD closed form equals transport solver", EmdOracle},
      {"graph_closed_forms", "graph sensitivity closed forms", GraphClosedForms},
      {"sensitivity_asymptotics", "sensitivity scaling in m, n, T",
       SensitivityAsymptotics},
      {"gaussian_mechanism", "Gaussian mechanism sigma", GaussianMechanism},
      {"backdoor", "seeded-noise backdoor round trip", Backdoor},
      {"feasibility", "true source inside the feasibility ball", Feasibility},
      {"two_peak", "two-peak recovery close in EMD, far in l2", TwoPeak},
      {"sigma_monotone", "error nondecreasing in sigma", SigmaMonotone},
      {"private_t_shape", "private error rises at both ends of T", PrivateTShape},
      {"lower_bound", "lower-bound arithmetic", LowerBoundArithmetic},
      {"ill_conditioning", "sensitivity vs condition number", IllConditioning},
      {"doubly_stochastic", "graph diffusion doubly stochastic", DoublyStochastic},
      {"graph_community", "SBM community recovered", GraphCommunity},
      {"fano_packing", "Fano packing EMD table and KL", FanoPackingTable},
  };
}

}  // namespace
}  // namespace heatcloak

int main(int argc, char** argv) {
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg.rfind("--criterion=", 0) == 0) {
      only = arg.substr(12);
    } else if (arg == "--list") {
      for (const auto& c : heatcloak::AllCriteria()) std::printf("%s\n", c.name.c_str());
      return 0;
    } else {
      std::fprintf(stderr, "usage: %s [--criterion=NAME] [--list]\n", argv[0]);
      return 2;
    }
  }
  int failures = 0, ran = 0;
  for (const auto& c : heatcloak::AllCriteria()) {
    if (!only.empty() && c.name != only) continue;
    ++ran;
    const heatcloak::Outcome o = c.run();
    failures += !o.pass;
    std::printf("%s %-24s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name.c_str(),
                c.title.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "unknown criterion '%s'\n", only.c_str());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
