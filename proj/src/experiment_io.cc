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

#include "heatcloak/experiment_io.h"

#include <algorithm>
#include <functional>
#include <map>
#include "absl/strings/string_view.h"
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "heatcloak/internal/status_macros.h"
#include "heatcloak/operator_io.h"

namespace heatcloak {
namespace {

std::string G12(double x) { return absl::StrFormat("%.12g", x); }

std::string JoinDoubles(const std::vector<double>& values) {
  return absl::StrJoin(values, ",", [](std::string* out, double v) {
    out->append(G12(v));
  });
}

absl::Status BadValue(absl::string_view key, absl::string_view value) {
  return absl::InvalidArgumentError(
      absl::StrFormat("config key '%s': cannot parse '%s'", key, value));
}

absl::StatusOr<double> ParseDouble(absl::string_view key,
                                   absl::string_view value) {
  double out;
  if (!absl::SimpleAtod(value, &out)) return BadValue(key, value);
  return out;
}

absl::StatusOr<int> ParseInt(absl::string_view key, absl::string_view value) {
  int out;
  if (!absl::SimpleAtoi(value, &out)) return BadValue(key, value);
  return out;
}

absl::StatusOr<bool> ParseBool(absl::string_view key, absl::string_view value) {
  bool out;
  if (!absl::SimpleAtob(value, &out)) return BadValue(key, value);
  return out;
}

absl::StatusOr<std::vector<double>> ParseList(absl::string_view key,
                                              absl::string_view value) {
  std::vector<double> out;
  for (absl::string_view item :
       absl::StrSplit(value, ',', absl::SkipWhitespace())) {
    ASSIGN_OR_RETURN(double v,
                     ParseDouble(key, absl::StripAsciiWhitespace(item)));
    out.push_back(v);
  }
  return out;
}

std::string PlacementName(SourcePlacement p) {
  switch (p) {
    case SourcePlacement::kCenter:
      return "center";
    case SourcePlacement::kUniformRandom:
      return "uniform";
    case SourcePlacement::kFixed:
      return "fixed";
  }
  return "center";
}

std::string ScaleName(LineNeighbourScale s) {
  return s == LineNeighbourScale::kGridStep ? "grid_step" : "emd_radius";
}

}  // namespace

const std::vector<std::string>& SweepCsvColumns() {
  static const auto* const kColumns = new std::vector<std::string>{
      "sweep_var",  "sweep_value", "trial",      "seed",      "n",
      "m",          "mu",          "t",          "T",         "k",
      "sigma_mode", "epsilon",     "delta",      "alpha",     "delta2",
      "sigma_used", "radius",      "emd_error",  "l2_error",  "iterations",
      "converged",  "degenerate",  "wall_ms"};
  return *kColumns;
}

absl::StatusOr<std::string> FormatSweepCsv(std::vector<TrialRecord> records) {
  if (records.empty()) {
    return absl::InvalidArgumentError("no records to emit");
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const TrialRecord& a, const TrialRecord& b) {
                     return std::pair(a.sweep_value, a.seed) <
                            std::pair(b.sweep_value, b.seed);
                   });
  std::string out = absl::StrJoin(SweepCsvColumns(), ",");
  out += "\n";
  for (const TrialRecord& r : records) {
    absl::StrAppend(
        &out,
        absl::StrJoin(
            std::vector<std::string>{r.sweep_var, G12(r.sweep_value), absl::StrCat(r.trial),
             absl::StrCat(r.seed), absl::StrCat(r.n), absl::StrCat(r.m),
             G12(r.mu), G12(r.t), G12(r.T), absl::StrCat(r.k),
             SigmaModeName(r.sigma_mode), G12(r.epsilon), G12(r.delta),
             G12(r.alpha), G12(r.delta2), G12(r.sigma_used), G12(r.radius),
             G12(r.emd_error), G12(r.l2_error), absl::StrCat(r.iterations),
             std::string(r.converged ? "1" : "0"),
             std::string(r.degenerate ? "1" : "0"),
             G12(r.wall_ms)},
            ","),
        "\n");
  }
  return out;
}

absl::StatusOr<std::string> FormatSummaryCsv(
    const std::vector<SweepSummary>& summary) {
  if (summary.empty()) {
    return absl::InvalidArgumentError("no summary rows to emit");
  }
  std::string out = "sweep_value,mean_emd,ci_lo,ci_hi,mean_delta2\n";
  for (const SweepSummary& s : summary) {
    absl::StrAppend(&out, G12(s.sweep_value), ",", G12(s.mean_emd), ",",
                    G12(s.ci_lo), ",", G12(s.ci_hi), ",", G12(s.mean_delta2),
                    "\n");
  }
  return out;
}

absl::Status WriteSweepCsv(const std::vector<TrialRecord>& records,
                           const std::string& path) {
  ASSIGN_OR_RETURN(std::string text, FormatSweepCsv(records));
  return WriteFile(path, text);
}

absl::Status WriteSummaryCsv(const std::vector<SweepSummary>& summary,
                             const std::string& path) {
  ASSIGN_OR_RETURN(std::string text, FormatSummaryCsv(summary));
  return WriteFile(path, text);
}

absl::Status SetConfigValue(ExperimentConfig& c, const std::string& key,
                            const std::string& value) {
  using Setter = std::function<absl::Status(ExperimentConfig&,
                                            const std::string&)>;
  auto real = [&key](double ExperimentConfig::*field) -> Setter {
    return [field, &key](ExperimentConfig& c, const std::string& v) {
      ASSIGN_OR_RETURN(c.*field, ParseDouble(key, v));
      return absl::OkStatus();
    };
  };
  auto integer = [&key](int ExperimentConfig::*field) -> Setter {
    return [field, &key](ExperimentConfig& c, const std::string& v) {
      ASSIGN_OR_RETURN(c.*field, ParseInt(key, v));
      return absl::OkStatus();
    };
  };
  const std::map<std::string, Setter, std::less<>> setters = {
      {"n", integer(&ExperimentConfig::n)},
      {"m", integer(&ExperimentConfig::m)},
      {"mu", real(&ExperimentConfig::mu)},
      {"t", real(&ExperimentConfig::t)},
      {"sigma", real(&ExperimentConfig::sigma)},
      {"epsilon", real(&ExperimentConfig::epsilon)},
      {"delta", real(&ExperimentConfig::delta)},
      {"alpha", real(&ExperimentConfig::alpha)},
      {"k", integer(&ExperimentConfig::k)},
      {"trials", integer(&ExperimentConfig::trials)},
      {"rho", real(&ExperimentConfig::rho)},
      {"ci_factor", real(&ExperimentConfig::ci_factor)},
      {"sigma_mode",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "fixed") {
           c.sigma_mode = SigmaMode::kFixed;
         } else if (v == "private") {
           c.sigma_mode = SigmaMode::kPrivate;
         } else {
           return BadValue("sigma_mode", v);
         }
         return absl::OkStatus();
       }},
      {"multiplier",
       [](ExperimentConfig& c, const std::string& v) {
         ASSIGN_OR_RETURN(c.multiplier, ParseNoiseMultiplier(v));
         return absl::OkStatus();
       }},
      {"neighbour_scale",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "grid_step") {
           c.neighbour_scale = LineNeighbourScale::kGridStep;
         } else if (v == "emd_radius") {
           c.neighbour_scale = LineNeighbourScale::kEmdRadius;
         } else {
           return BadValue("neighbour_scale", v);
         }
         return absl::OkStatus();
       }},
      {"placement",
       [](ExperimentConfig& c, const std::string& v) {
         if (v == "center") {
           c.placement = SourcePlacement::kCenter;
         } else if (v == "uniform") {
           c.placement = SourcePlacement::kUniformRandom;
         } else if (v == "fixed") {
           c.placement = SourcePlacement::kFixed;
         } else {
           return BadValue("placement", v);
         }
         return absl::OkStatus();
       }},
      {"locations",
       [](ExperimentConfig& c, const std::string& v) {
         ASSIGN_OR_RETURN(c.locations, ParseList("locations", v));
         return absl::OkStatus();
       }},
      {"sweep_var",
       [](ExperimentConfig& c, const std::string& v) {
         c.sweep_var = v;
         return absl::OkStatus();
       }},
      {"sweep_values",
       [](ExperimentConfig& c, const std::string& v) {
         ASSIGN_OR_RETURN(c.sweep_values, ParseList("sweep_values", v));
         return absl::OkStatus();
       }},
      {"widen_infeasible",
       [](ExperimentConfig& c, const std::string& v) {
         ASSIGN_OR_RETURN(c.widen_infeasible, ParseBool("widen_infeasible", v));
         return absl::OkStatus();
       }},
      {"seed",
       [](ExperimentConfig& c, const std::string& v) {
         uint64_t seed;
         if (!absl::SimpleAtoi(v, &seed)) return BadValue("seed", v);
         c.seed = seed;
         return absl::OkStatus();
       }},
      {"tol_feasibility",
       [](ExperimentConfig& c, const std::string& v) {
         ASSIGN_OR_RETURN(c.solver.feasibility, ParseDouble("tol_feasibility", v));
         return absl::OkStatus();
       }},
      {"tol_optimality",
       [](ExperimentConfig& c, const std::string& v) {
         ASSIGN_OR_RETURN(c.solver.optimality, ParseDouble("tol_optimality", v));
         return absl::OkStatus();
       }},
      {"max_iterations",
       [](ExperimentConfig& c, const std::string& v) {
         ASSIGN_OR_RETURN(c.solver.max_iterations,
                          ParseInt("max_iterations", v));
         return absl::OkStatus();
       }},
  };
  auto it = setters.find(key);
  if (it == setters.end()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown config key '%s'", key));
  }
  return it->second(c, value);
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const std::string& text, const ExperimentConfig& base) {
  ExperimentConfig config = base;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = line.substr(0, line.find('#'));
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrFormat("config line %d: expected key = value", line_no));
    }
    const std::string key(absl::StripAsciiWhitespace(line.substr(0, eq)));
    const std::string value(absl::StripAsciiWhitespace(line.substr(eq + 1)));
    absl::Status status = SetConfigValue(config, key, value);
    if (!status.ok()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "config line %d: %s", line_no, status.message()));
    }
  }
  return config;
}

absl::StatusOr<ExperimentConfig> ReadExperimentConfig(
    const std::string& path, const ExperimentConfig& base) {
  ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseExperimentConfig(text, base);
}

std::string FormatExperimentConfig(const ExperimentConfig& c) {
  std::string out;
  auto put = [&out](absl::string_view key, absl::string_view value) {
    absl::StrAppend(&out, key, " = ", value, "\n");
  };
  put("n", absl::StrCat(c.n));
  put("m", absl::StrCat(c.m));
  put("mu", G12(c.mu));
  put("t", G12(c.t));
  put("sigma_mode", SigmaModeName(c.sigma_mode));
  put("sigma", G12(c.sigma));
  put("epsilon", G12(c.epsilon));
  put("delta", G12(c.delta));
  put("alpha", G12(c.alpha));
  put("multiplier", NoiseMultiplierName(c.multiplier));
  put("neighbour_scale", ScaleName(c.neighbour_scale));
  put("k", absl::StrCat(c.k));
  put("placement", PlacementName(c.placement));
  if (!c.locations.empty()) put("locations", JoinDoubles(c.locations));
  put("trials", absl::StrCat(c.trials));
  put("sweep_var", c.sweep_var);
  put("sweep_values", JoinDoubles(c.sweep_values));
  put("rho", G12(c.rho));
  put("widen_infeasible", c.widen_infeasible ? "true" : "false");
  put("ci_factor", G12(c.ci_factor));
  put("seed", absl::StrCat(c.seed));
  put("tol_feasibility", G12(c.solver.feasibility));
  put("tol_optimality", G12(c.solver.optimality));
  put("max_iterations", absl::StrCat(c.solver.max_iterations));
  return out;
}

std::vector<std::string> PresetNames() {
  return {"nonprivate-sigma", "nonprivate-m", "nonprivate-t",
          "nonprivate-n",     "private-t",    "two-peak"};
}

absl::StatusOr<ExperimentConfig> PresetConfig(const std::string& name) {
  ExperimentConfig c;
  if (name == "nonprivate-sigma") {
    c.sweep_var = "sigma";
    c.sweep_values = {0.05, 0.1, 0.2, 0.4};
  } else if (name == "nonprivate-m") {
    c.sweep_var = "m";
    c.sweep_values = {10, 20, 50, 100, 200};
  } else if (name == "nonprivate-t") {
    c.sigma = 0.2;
    c.sweep_var = "t";
    c.sweep_values = {0.02, 0.1, 0.2, 1, 2, 4};
  } else if (name == "nonprivate-n") {
    c.t = 0.1;
    c.sigma = 0.2;
    c.sweep_var = "n";
    c.sweep_values = {50, 100, 200, 400};
  } else if (name == "private-t") {
    c.sigma_mode = SigmaMode::kPrivate;
    c.sweep_var = "t";
    // T = mu * t in {0.01, 0.05, 0.5, 2, 5}.
    c.sweep_values = {0.02, 0.1, 1, 4, 10};
  } else if (name == "two-peak") {
    c.t = 0.1;
    c.k = 2;
    c.placement = SourcePlacement::kFixed;
    c.locations = {0.24, 0.76};
    c.sweep_var = "sigma";
    c.sweep_values = {0.1};
  } else {
    return absl::NotFoundError(absl::StrFormat(
        "unknown preset '%s' (%s)", name, absl::StrJoin(PresetNames(), ", ")));
  }
  return c;
}

}  // namespace heatcloak
