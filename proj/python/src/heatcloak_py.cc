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

// Python bindings for the heatcloak core. Statuses become exceptions:
// argument and precondition errors raise ValueError, anything else
// RuntimeError.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "heatcloak/bounds.h"
#include "heatcloak/diffusion.h"
#include "heatcloak/emd.h"
#include "heatcloak/experiment_io.h"
#include "heatcloak/graph.h"
#include "heatcloak/harness.h"
#include "heatcloak/privacy.h"
#include "heatcloak/recovery.h"
#include "pybind11/eigen.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"

namespace py = pybind11;

namespace heatcloak {
namespace {

void Raise(const absl::Status& status) {
  if (status.ok()) return;
  const std::string message(status.message());
  if (absl::IsInvalidArgument(status) || absl::IsFailedPrecondition(status) ||
      absl::IsOutOfRange(status)) {
    throw py::value_error(message);
  }
  throw std::runtime_error(status.ToString());
}

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  Raise(value.status());
  return *std::move(value);
}

SourceVector OnGrid(const Eigen::VectorXd& weights,
                    const std::optional<std::vector<double>>& grid) {
  if (grid.has_value()) return Unwrap(SourceVector::Create(weights, *grid));
  return Unwrap(SourceVector::OnUnitInterval(weights));
}

py::dict RecoveryDict(const RecoveryResult& r) {
  py::dict d;
  d["estimate"] = r.estimate;
  d["objective"] = r.objective;
  d["residual_norm"] = r.residual_norm;
  d["violation"] = r.constraint_violation;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["degenerate"] = r.degenerate;
  return d;
}

py::dict RecordDict(const TrialRecord& r) {
  py::dict d;
  d["sweep_var"] = r.sweep_var;
  d["sweep_value"] = r.sweep_value;
  d["trial"] = r.trial;
  d["seed"] = r.seed;
  d["n"] = r.n;
  d["m"] = r.m;
  d["mu"] = r.mu;
  d["t"] = r.t;
  d["T"] = r.T;
  d["k"] = r.k;
  d["sigma_mode"] = SigmaModeName(r.sigma_mode);
  d["epsilon"] = r.epsilon;
  d["delta"] = r.delta;
  d["alpha"] = r.alpha;
  d["delta2"] = r.delta2;
  d["sigma_used"] = r.sigma_used;
  d["radius"] = r.radius;
  d["emd_error"] = r.emd_error;
  d["l2_error"] = r.l2_error;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["degenerate"] = r.degenerate;
  d["radius_widened"] = r.radius_widened;
  d["wall_ms"] = r.wall_ms;
  return d;
}

// Preset (optional) plus key/value overrides, all values given as strings
// in the config-file syntax.
ExperimentConfig BuildConfig(const std::string& preset,
                             const std::map<std::string, std::string>& values) {
  ExperimentConfig config;
  if (!preset.empty()) config = Unwrap(PresetConfig(preset));
  for (const auto& [key, value] : values) {
    Raise(SetConfigValue(config, key, value));
  }
  Raise(config.Validate());
  return config;
}

}  // namespace
}  // namespace heatcloak

PYBIND11_MODULE(_core, m) {
  using namespace heatcloak;
  m.doc() = "Private diffusion-source release and recovery";

  m.def("gaussian_kernel",
        [](double x, double T) { return Unwrap(GaussianKernel(x, T)); },
        py::arg("x"), py::arg("T"));

  m.def(
      "heat_kernel_matrix",
      [](int n, int m_, double mu, double t) {
        return Unwrap(HeatKernelMatrix(n, m_, mu, t)).matrix;
      },
      py::arg("n"), py::arg("m"), py::arg("mu") = 0.5, py::arg("t") = 1.0);

  m.def(
      "graph_diffusion_operator",
      [](const Eigen::MatrixXd& weights, double tau) {
        const Graph g = Unwrap(GraphLaplacian(weights));
        return Unwrap(GraphDiffusionOperator(g, tau)).matrix;
      },
      py::arg("weights"), py::arg("tau"));

  m.def(
      "emd_line",
      [](const Eigen::VectorXd& p, const Eigen::VectorXd& q,
         const std::optional<std::vector<double>>& grid) {
        return Unwrap(EmdLine(OnGrid(p, grid), OnGrid(q, grid)));
      },
      py::arg("p"), py::arg("q"), py::arg("grid") = py::none(),
      "EMD on a line; the default grid is j/n, j = 1..n.");

  m.def(
      "emd",
      [](const Eigen::VectorXd& p, const Eigen::VectorXd& q,
         const Eigen::MatrixXd& distances) {
        const GroundMetric metric = Unwrap(GroundMetric::Create(distances));
        const SourceVector a = Unwrap(SourceVector::OnNodes(p));
        const SourceVector b = Unwrap(SourceVector::OnNodes(q));
        return Unwrap(EmdFlow(a, b, metric)).cost;
      },
      py::arg("p"), py::arg("q"), py::arg("distances"));

  m.def(
      "sensitivity_line",
      [](const Eigen::MatrixXd& matrix, double alpha, const std::string& scale) {
        DiffusionOperator op;
        op.matrix = matrix;
        const SensitivityReport r = Unwrap(SensitivityLine(
            op, alpha,
            scale == "emd_radius" ? LineNeighbourScale::kEmdRadius
                                  : LineNeighbourScale::kGridStep));
        py::dict d;
        d["delta2"] = r.delta2;
        d["argmax_pair"] = py::make_tuple(r.argmax_pair.first, r.argmax_pair.second);
        d["pair_norms"] = r.pair_norms;
        d["scale"] = r.scale;
        return d;
      },
      py::arg("matrix"), py::arg("alpha") = 1.0, py::arg("scale") = "grid_step");

  m.def(
      "gaussian_sigma",
      [](double epsilon, double delta, double delta2, double alpha,
         const std::string& multiplier) {
        const PrivacyParams p = Unwrap(PrivacyParams::Create(epsilon, delta, alpha));
        return Unwrap(GaussianSigma(p, delta2, Unwrap(ParseNoiseMultiplier(multiplier))));
      },
      py::arg("epsilon"), py::arg("delta"), py::arg("delta2"),
      py::arg("alpha") = 1.0, py::arg("multiplier") = "printed");

  m.def(
      "privatize",
      [](const Eigen::VectorXd& y, double sigma, uint64_t seed) {
        return Unwrap(Privatize(y, sigma, seed));
      },
      py::arg("y"), py::arg("sigma"), py::arg("seed"));

  m.def(
      "denoise_backdoor",
      [](const Eigen::VectorXd& y_tilde, double sigma, uint64_t seed) {
        return Unwrap(DenoiseBackdoor(y_tilde, sigma, seed));
      },
      py::arg("y_tilde"), py::arg("sigma"), py::arg("seed"));

  m.def("feasibility_radius", &FeasibilityRadius, py::arg("sigma"),
        py::arg("m"), py::arg("rho") = 0.0);

  m.def(
      "bpd_solve",
      [](const Eigen::MatrixXd& matrix, const Eigen::VectorXd& y, double radius,
         double tol, int max_iterations) {
        SolverTolerances t;
        t.feasibility = tol;
        t.optimality = tol;
        t.max_iterations = max_iterations;
        const RecoveryProblem problem =
            Unwrap(RecoveryProblem::Create(matrix, y, radius));
        return RecoveryDict(Unwrap(BpdSolve(problem, t)));
      },
      py::arg("matrix"), py::arg("y"), py::arg("radius"), py::arg("tol") = 1e-6,
      py::arg("max_iterations") = 50000);

  m.def(
      "upper_bound",
      [](int k, double T, double sigma, int m_, int n, double sep,
         std::optional<double> min_distance) {
        BoundInputs in;
        in.k = k;
        in.T = T;
        in.sigma = sigma;
        in.m = m_;
        in.n = n;
        in.sep = sep;
        in.min_source_distance = min_distance;
        const BoundValue b = Unwrap(UpperBoundEmd(in));
        py::dict d;
        d["value"] = b.value;
        d["c"] = b.c;
        d["hypothesis_enough_sensors"] = b.hypothesis_enough_sensors;
        d["hypothesis_early"] = b.hypothesis_early;
        d["hypothesis_separated"] = b.hypothesis_separated;
        d["prefactor_infinite"] = b.prefactor_infinite;
        d["capped"] = b.capped;
        d["convention"] = b.convention;
        return d;
      },
      py::arg("k"), py::arg("T"), py::arg("sigma"), py::arg("m"), py::arg("n"),
      py::arg("sep"), py::arg("min_distance") = py::none());

  m.def(
      "lower_bound",
      [](double T, double sigma, int m_) {
        return Unwrap(LowerBoundEmd(T, sigma, m_));
      },
      py::arg("T"), py::arg("sigma"), py::arg("m"));

  m.def(
      "fano_packing",
      [](double a, int n) {
        const FanoPacking p = Unwrap(MakeFanoPacking(a, n));
        py::list members;
        for (const SourceVector& f : p.members) members.append(f.weights);
        py::dict d;
        d["members"] = members;
        d["emd"] = Eigen::MatrixXd(p.emd);
        d["snap_error"] = p.snap_error;
        return d;
      },
      py::arg("a"), py::arg("n"));

  m.def("preset_names", &PresetNames);

  m.def(
      "preset_config",
      [](const std::string& name) {
        return FormatExperimentConfig(Unwrap(PresetConfig(name)));
      },
      py::arg("name"));

  m.def(
      "run_sweep",
      [](const std::string& preset,
         const std::map<std::string, std::string>& values) {
        const ExperimentConfig config = BuildConfig(preset, values);
        absl::StatusOr<SweepResult> run;
        {
          py::gil_scoped_release release;
          run = RunSweep(config);
        }
        const SweepResult result = Unwrap(std::move(run));
        py::list records;
        for (const TrialRecord& r : result.records) records.append(RecordDict(r));
        py::list summary;
        for (const SweepSummary& s : result.summary) {
          py::dict d;
          d["sweep_value"] = s.sweep_value;
          d["mean_emd"] = s.mean_emd;
          d["ci_lo"] = s.ci_lo;
          d["ci_hi"] = s.ci_hi;
          d["mean_delta2"] = s.mean_delta2;
          summary.append(std::move(d));
        }
        py::dict out;
        out["records"] = records;
        out["summary"] = summary;
        out["config"] = FormatExperimentConfig(config);
        return out;
      },
      py::arg("preset") = "", py::arg("values") = std::map<std::string, std::string>{},
      "Run a sweep from an optional preset plus string key/value overrides.");
}
