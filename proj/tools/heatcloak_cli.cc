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

// Command-line front end: operators, sensitivity, privatization, recovery,
// sweeps, the graph demo, bound evaluation and the Fano packing.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "heatcloak/bounds.h"
#include "heatcloak/diffusion.h"
#include "heatcloak/emd.h"
#include "heatcloak/experiment_io.h"
#include "heatcloak/graph.h"
#include "heatcloak/harness.h"
#include "heatcloak/operator_io.h"
#include "heatcloak/privacy.h"
#include "heatcloak/recovery.h"
#include "nlohmann/json.hpp"

namespace heatcloak {
namespace {

using json = nlohmann::ordered_json;

// Thrown out of subcommand callbacks; main() prints it and exits 1.
struct CommandError {
  absl::Status status;
};

void Check(const absl::Status& status) {
  if (!status.ok()) throw CommandError{status};
}

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  Check(value.status());
  return *std::move(value);
}

void Print(const json& j) { std::cout << j.dump(2) << "\n"; }

void WriteJson(const json& j, const std::string& path) {
  Check(WriteFile(path, j.dump(2) + "\n"));
}

std::string SidecarPath(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".json");
  return p.string();
}

json ToJson(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json RecoveryJson(const RecoveryResult& r) {
  return {{"objective", r.objective},
          {"residual_norm", r.residual_norm},
          {"violation", r.constraint_violation},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"degenerate", r.degenerate}};
}

// Shared interval-kernel options.
struct KernelArgs {
  int n = 100;
  int m = 50;
  double mu = 0.5;
  double t = 1.0;

  void Add(CLI::App* app) {
    app->add_option("--n", n, "number of source grid points")
        ->capture_default_str();
    app->add_option("--m", m, "number of sensors")->capture_default_str();
    app->add_option("--mu", mu, "diffusion rate")->capture_default_str();
    app->add_option("--t", t, "sampling time; T = mu t")->capture_default_str();
  }
};

// ---------------------------------------------------------------- kernel

struct KernelCmd {
  KernelArgs kernel;
  std::string graph;
  int nodes = 10;
  double tau = 1.0;
  std::string output;

  void Run() const {
    DiffusionOperator op;
    if (graph.empty()) {
      op = Unwrap(HeatKernelMatrix(kernel.n, kernel.m, kernel.mu, kernel.t));
    } else {
      Graph g = graph == "complete" ? CompleteGraph(nodes)
                : graph == "star"   ? StarGraph(nodes)
                                    : PathGraph(nodes);
      op = Unwrap(GraphDiffusionOperator(g, tau));
    }
    if (output.empty()) {
      std::cout << FormatOperatorCsv(op);
    } else {
      Check(WriteOperatorCsv(op, output));
    }
  }
};

// ----------------------------------------------------------- sensitivity

struct SensitivityCmd {
  KernelArgs kernel;
  std::string operator_path;
  double alpha = 1.0;
  std::string scale = "grid_step";

  void Run() const {
    const DiffusionOperator op =
        operator_path.empty()
            ? Unwrap(HeatKernelMatrix(kernel.n, kernel.m, kernel.mu, kernel.t))
            : Unwrap(ReadOperatorCsv(operator_path));
    const LineNeighbourScale s = scale == "emd_radius"
                                     ? LineNeighbourScale::kEmdRadius
                                     : LineNeighbourScale::kGridStep;
    const SensitivityReport r = Unwrap(SensitivityLine(op, alpha, s));
    Print({{"delta2", r.delta2},
           {"argmax_pair",
            {r.argmax_pair.first, r.argmax_pair.second}},
           {"alpha", alpha},
           {"neighbour_scale", scale},
           {"scale", r.scale},
           {"n", op.num_sources()},
           {"m", op.num_sensors()}});
  }
};

// ------------------------------------------------------------- privatize

struct PrivatizeCmd {
  std::string input;
  std::string output;
  double epsilon = 4.0;
  double delta = 0.1;
  double alpha = 1.0;
  uint64_t seed = 1;
  std::string multiplier = "printed";
  std::optional<double> delta2;
  std::string operator_path;
  KernelArgs kernel;
  bool backdoor = false;
  std::optional<double> sigma;

  void Run() const {
    const Eigen::VectorXd y = Unwrap(ReadVectorCsv(input));
    const NoiseMultiplier mult = Unwrap(ParseNoiseMultiplier(multiplier));
    const PrivacyParams params =
        Unwrap(PrivacyParams::Create(epsilon, delta, alpha));

    // Sensitivity: explicit, from an operator file, or from the kernel flags.
    double d2 = 0.0;
    std::string d2_source;
    if (delta2.has_value()) {
      d2 = *delta2;
      d2_source = "flag";
    } else {
      const DiffusionOperator op =
          operator_path.empty()
              ? Unwrap(HeatKernelMatrix(kernel.n, kernel.m, kernel.mu, kernel.t))
              : Unwrap(ReadOperatorCsv(operator_path));
      if (op.num_sensors() != y.size()) {
        Check(absl::InvalidArgumentError(
            "DimensionMismatch: operator rows differ from measurement length"));
      }
      d2 = Unwrap(SensitivityLine(op, alpha)).delta2;
      d2_source = operator_path.empty() ? "kernel" : "operator";
    }

    double s = sigma.has_value() ? *sigma : Unwrap(GaussianSigma(params, d2, mult));
    const std::string out = output.empty() ? "y_private.csv" : output;
    Eigen::VectorXd result;
    if (backdoor) {
      result = Unwrap(DenoiseBackdoor(y, s, seed));
    } else {
      result = Unwrap(Privatize(y, s, seed));
    }
    Check(WriteVectorCsv(result, backdoor ? "y" : "y_tilde", out));
    json meta = {{"mode", backdoor ? "backdoor" : "privatize"},
                 {"input", input},
                 {"output", out},
                 {"epsilon", epsilon},
                 {"delta", delta},
                 {"alpha", alpha},
                 {"multiplier", NoiseMultiplierName(mult)},
                 {"multiplier_value", NoiseMultiplierValue(mult, delta)},
                 {"delta2", d2},
                 {"delta2_source", d2_source},
                 {"sigma", s},
                 {"sigma_overridden", sigma.has_value()},
                 {"seed", seed},
                 {"noise_quantum", NoiseOptions{}.quantum},
                 {"length", y.size()}};
    WriteJson(meta, SidecarPath(out));
  }
};

// --------------------------------------------------------------- recover

struct RecoverCmd {
  std::string operator_path;
  std::string measurements;
  double radius = 0.0;
  std::string output = "f_hat.csv";
  std::string diagnostics;
  bool widen = false;
  SolverTolerances tol;

  void Run() const {
    const DiffusionOperator op = Unwrap(ReadOperatorCsv(operator_path));
    const Eigen::VectorXd y = Unwrap(ReadVectorCsv(measurements));
    RecoveryProblem problem =
        Unwrap(RecoveryProblem::Create(op.matrix, y, radius));
    absl::StatusOr<RecoveryResult> result = BpdSolve(problem, tol);
    bool widened = false;
    if (!result.ok() && widen && absl::IsFailedPrecondition(result.status())) {
      const BoxResidual closest =
          MinimizeBoxResidual(op.matrix, y, 0.0, tol.max_iterations);
      problem.radius = closest.upper * (1.0 + 1e-2);
      result = BpdSolve(problem, tol);
      widened = true;
    }
    const RecoveryResult r = Unwrap(std::move(result));
    Check(WriteVectorCsv(r.estimate, "f_hat", output));
    json diag = RecoveryJson(r);
    diag["radius"] = problem.radius;
    diag["radius_widened"] = widened;
    WriteJson(diag, diagnostics.empty() ? SidecarPath(output) : diagnostics);
  }
};

// ----------------------------------------------------------------- sweep

struct SweepCmd {
  std::string config_path;
  std::string preset;
  std::vector<std::string> overrides;
  std::string output_dir = ".";
  bool no_timing = false;
  bool print_config = false;

  void Run() const {
    ExperimentConfig config;
    if (!preset.empty()) config = Unwrap(PresetConfig(preset));
    if (!config_path.empty()) {
      config = Unwrap(ReadExperimentConfig(config_path, config));
    }
    for (const std::string& kv : overrides) {
      std::pair<std::string, std::string> parts =
          absl::StrSplit(kv, absl::MaxSplits('=', 1));
      Check(SetConfigValue(config, parts.first, parts.second));
    }
    Check(config.Validate());
    if (print_config) {
      std::cout << FormatExperimentConfig(config);
      return;
    }

    SweepResult result = Unwrap(RunSweep(config));
    if (no_timing) {
      for (TrialRecord& rec : result.records) rec.wall_ms = 0.0;
    }
    std::filesystem::create_directories(output_dir);
    const std::filesystem::path dir(output_dir);
    Check(WriteSweepCsv(result.records, (dir / "sweep.csv").string()));
    Check(WriteSummaryCsv(result.summary, (dir / "summary.csv").string()));

    int widened = 0, degenerate = 0, unconverged = 0;
    for (const TrialRecord& rec : result.records) {
      widened += rec.radius_widened;
      degenerate += rec.degenerate;
      unconverged += !rec.converged;
    }
    json meta = {{"preset", preset},
                 {"config_file", config_path},
                 {"config", FormatExperimentConfig(config)},
                 {"sweep_var", config.sweep_var},
                 {"trials", config.trials},
                 {"seed", config.seed},
                 {"ci_factor", config.ci_factor},
                 {"ci_method", "normal approximation, mean +- ci_factor * sd / sqrt(trials)"},
                 {"multiplier", NoiseMultiplierName(config.multiplier)},
                 {"sigma_mode", SigmaModeName(config.sigma_mode)},
                 {"records", result.records.size()},
                 {"radius_widened", widened},
                 {"degenerate", degenerate},
                 {"unconverged", unconverged},
                 {"timing", !no_timing}};
    WriteJson(meta, (dir / "metadata.json").string());
    std::cout << Unwrap(FormatSummaryCsv(result.summary));
  }
};

// ------------------------------------------------------------ graph-demo

struct GraphDemoCmd {
  GraphDemoConfig config;
  std::string multiplier = "printed";
  std::string estimate_path;

  void Run() {
    config.multiplier = Unwrap(ParseNoiseMultiplier(multiplier));
    const GraphDemoReport r = Unwrap(RunGraphDemo(config));
    json out = {{"n", config.n},
                {"communities", config.communities},
                {"p_in", config.p_in},
                {"p_out", config.p_out},
                {"tau", config.tau},
                {"epsilon", config.epsilon},
                {"delta", config.delta},
                {"seed", config.seed},
                {"attempts", r.attempts},
                {"source_node", r.source_node},
                {"true_community", r.true_community},
                {"recovered_community", r.recovered_community},
                {"true_community_mass_fraction", r.true_community_mass_fraction},
                {"correct_community", r.correct_community},
                {"emd_error", r.emd_error},
                {"delta2", r.delta2},
                {"sigma", r.sigma},
                {"radius", r.radius},
                {"radius_widened", r.radius_widened},
                {"flat_diffusion", r.flat_diffusion},
                {"degenerate", r.degenerate},
                {"recovery", RecoveryJson(r.recovery)}};
    Print(out);
    if (!estimate_path.empty()) {
      Check(WriteVectorCsv(r.recovery.estimate, "f_hat", estimate_path));
    }
  }
};

// ---------------------------------------------------------------- bounds

struct BoundsCmd {
  BoundInputs in;
  std::optional<double> min_distance;
  bool lower = false;

  void Run() {
    if (lower) {
      const double v = Unwrap(LowerBoundEmd(in.T, in.sigma, in.m));
      Print({{"bound", "lower"},
             {"value", v},
             {"T", in.T},
             {"sigma", in.sigma},
             {"m", in.m},
             {"convention", kConstantConvention}});
      return;
    }
    in.min_source_distance = min_distance;
    const BoundValue b = Unwrap(UpperBoundEmd(in));
    Print({{"bound", "upper"},
           {"value", b.value},
           {"c", b.c},
           {"k", in.k},
           {"T", in.T},
           {"sigma", in.sigma},
           {"m", in.m},
           {"n", in.n},
           {"sep", in.sep},
           {"flags",
            {{"hypothesis_enough_sensors", b.hypothesis_enough_sensors},
             {"hypothesis_early", b.hypothesis_early},
             {"hypothesis_separated", b.hypothesis_separated},
             {"separation_checked", b.separation_checked},
             {"prefactor_infinite", b.prefactor_infinite},
             {"capped", b.capped},
             {"hypotheses_hold", b.HypothesesHold()}}},
           {"convention", b.convention}});
  }
};

// --------------------------------------------------------------- packing

struct PackingCmd {
  double a = 0.2;
  int n = 100;
  std::optional<double> sigma;
  int m = 50;
  double T = 0.5;

  void Run() const {
    const FanoPacking p = Unwrap(MakeFanoPacking(a, n));
    json members = json::array();
    for (const SourceVector& f : p.members) {
      json support = json::array();
      for (int j = 0; j < f.size(); ++j) {
        if (f.weights(j) != 0.0) {
          support.push_back({{"location", f.grid[j]}, {"weight", f.weights(j)}});
        }
      }
      members.push_back(std::move(support));
    }
    json out = {{"a", a},
                {"n", n},
                {"snap_error", p.snap_error},
                {"members", members},
                {"emd", ToJson(p.emd)}};
    if (sigma.has_value()) {
      // Heat-kernel measurement KL between every pair of members.
      const DiffusionOperator op = Unwrap(HeatKernelMatrix(n, m, 1.0, T));
      Eigen::Matrix4d kl = Eigen::Matrix4d::Zero();
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          kl(i, j) = Unwrap(GaussianMeasurementKl(op.matrix, p.members[i],
                                                  p.members[j], *sigma));
        }
      }
      out["kl"] = {{"sigma", *sigma}, {"m", m}, {"T", T}, {"table", ToJson(kl)}};
    }
    Print(out);
  }
};

void AddTolerances(CLI::App* app, SolverTolerances& tol) {
  app->add_option("--tol", tol.feasibility, "feasibility tolerance")
      ->capture_default_str();
  app->add_option("--tol-optimality", tol.optimality, "optimality tolerance")
      ->capture_default_str();
  app->add_option("--max-iterations", tol.max_iterations, "iteration cap")
      ->capture_default_str();
}

int Main(int argc, char** argv) {
  CLI::App app{"heatcloak: private diffusion-source release and recovery"};
  app.require_subcommand(1);

  KernelCmd kernel;
  CLI::App* k = app.add_subcommand("kernel", "write a diffusion operator as CSV");
  kernel.kernel.Add(k);
  k->add_option("--graph", kernel.graph, "graph family instead of the interval")
      ->check(CLI::IsMember({"complete", "star", "path"}));
  k->add_option("--nodes", kernel.nodes, "graph size")->capture_default_str();
  k->add_option("--tau", kernel.tau, "graph diffusion time")
      ->capture_default_str();
  k->add_option("-o,--output", kernel.output, "output path (stdout if absent)");
  k->callback([&] { kernel.Run(); });

  SensitivityCmd sens;
  CLI::App* s = app.add_subcommand("sensitivity", "adjacent-column sensitivity");
  sens.kernel.Add(s);
  s->add_option("--operator", sens.operator_path, "operator CSV instead of the kernel");
  s->add_option("--alpha", sens.alpha, "neighbour radius")->capture_default_str();
  s->add_option("--scale", sens.scale, "grid_step or emd_radius")
      ->check(CLI::IsMember({"grid_step", "emd_radius"}))
      ->capture_default_str();
  s->callback([&] { sens.Run(); });

  PrivatizeCmd priv;
  CLI::App* p = app.add_subcommand("privatize", "add calibrated Gaussian noise");
  p->add_option("--input", priv.input, "measurement CSV")->required();
  p->add_option("-o,--output", priv.output, "output CSV; a .json sidecar is written alongside");
  p->add_option("--epsilon", priv.epsilon)->capture_default_str();
  p->add_option("--delta", priv.delta)->capture_default_str();
  p->add_option("--alpha", priv.alpha)->capture_default_str();
  p->add_option("--seed", priv.seed)->capture_default_str();
  p->add_option("--multiplier", priv.multiplier, "printed or standard")
      ->check(CLI::IsMember({"printed", "standard"}))
      ->capture_default_str();
  p->add_option("--delta2", priv.delta2, "sensitivity, skipping its computation");
  p->add_option("--operator", priv.operator_path, "operator CSV for the sensitivity");
  priv.kernel.Add(p);
  p->add_option("--sigma", priv.sigma, "noise scale, overriding calibration");
  p->add_flag("--backdoor", priv.backdoor,
              "subtract the seeded noise instead of adding it");
  p->callback([&] { priv.Run(); });

  RecoverCmd rec;
  CLI::App* r = app.add_subcommand("recover", "basis pursuit denoising recovery");
  r->add_option("--operator", rec.operator_path, "operator CSV")->required();
  r->add_option("--measurements", rec.measurements, "measurement CSV")->required();
  r->add_option("--radius", rec.radius, "feasibility radius")->required();
  r->add_option("-o,--output", rec.output, "estimate CSV")->capture_default_str();
  r->add_option("--diagnostics", rec.diagnostics, "diagnostics JSON path");
  r->add_flag("--widen", rec.widen, "widen the radius if the ball misses the box");
  AddTolerances(r, rec.tol);
  r->callback([&] { rec.Run(); });

  SweepCmd sweep;
  CLI::App* w = app.add_subcommand("sweep", "run a parameter sweep");
  w->add_option("--config", sweep.config_path, "key = value config file");
  w->add_option("--preset", sweep.preset, "named preset")
      ->check(CLI::IsMember(PresetNames()));
  w->add_option("--set", sweep.overrides, "key=value override (repeatable)");
  w->add_option("--output-dir", sweep.output_dir)->capture_default_str();
  w->add_flag("--no-timing", sweep.no_timing, "zero wall_ms for byte-stable output");
  w->add_flag("--print-config", sweep.print_config, "print the resolved config and exit");
  w->callback([&] { sweep.Run(); });

  GraphDemoCmd demo;
  CLI::App* g = app.add_subcommand("graph-demo", "SBM community recovery demo");
  g->add_option("--n", demo.config.n)->capture_default_str();
  g->add_option("--communities", demo.config.communities)->capture_default_str();
  g->add_option("--p-in", demo.config.p_in, "intra-community edge probability")
      ->capture_default_str();
  g->add_option("--p-out", demo.config.p_out, "inter-community edge probability")
      ->capture_default_str();
  g->add_option("--tau", demo.config.tau)->capture_default_str();
  g->add_option("--epsilon", demo.config.epsilon)->capture_default_str();
  g->add_option("--delta", demo.config.delta)->capture_default_str();
  g->add_option("--alpha", demo.config.alpha)->capture_default_str();
  g->add_option("--multiplier", demo.multiplier)
      ->check(CLI::IsMember({"printed", "standard"}))
      ->capture_default_str();
  g->add_option("--rho", demo.config.rho)->capture_default_str();
  g->add_option("--max-resamples", demo.config.max_resamples)
      ->capture_default_str();
  g->add_option("--seed", demo.config.seed)->capture_default_str();
  g->add_option("--estimate", demo.estimate_path, "write the estimate CSV here");
  AddTolerances(g, demo.config.solver);
  g->callback([&] { demo.Run(); });

  BoundsCmd bounds;
  CLI::App* b = app.add_subcommand("bounds", "evaluate the EMD error bounds");
  b->add_option("--k", bounds.in.k)->capture_default_str();
  b->add_option("--T", bounds.in.T)->capture_default_str();
  b->add_option("--sigma", bounds.in.sigma)->capture_default_str();
  b->add_option("--m", bounds.in.m)->capture_default_str();
  b->add_option("--n", bounds.in.n)->capture_default_str();
  b->add_option("--sep", bounds.in.sep)->capture_default_str();
  b->add_option("--min-distance", bounds.min_distance,
                "smallest source separation, checked against the hypothesis");
  b->add_flag("--lower", bounds.lower, "evaluate the minimax lower bound");
  b->callback([&] { bounds.Run(); });

  PackingCmd packing;
  CLI::App* f = app.add_subcommand("packing", "Fano packing EMD table");
  f->add_option("--a", packing.a)->capture_default_str();
  f->add_option("--n", packing.n)->capture_default_str();
  f->add_option("--sigma", packing.sigma, "also report measurement KL at this sigma");
  f->add_option("--m", packing.m)->capture_default_str();
  f->add_option("--T", packing.T)->capture_default_str();
  f->callback([&] { packing.Run(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.status.ToString() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace heatcloak

int main(int argc, char** argv) { return heatcloak::Main(argc, argv); }
