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

// Sweep CSV emission and the flat key=value experiment config format.

#ifndef HEATCLOAK_EXPERIMENT_IO_H_
#define HEATCLOAK_EXPERIMENT_IO_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "heatcloak/harness.h"

namespace heatcloak {

// Column names of the per-trial CSV, in order.
const std::vector<std::string>& SweepCsvColumns();

// Header plus one row per record, floats at 12 significant digits. Rows are
// emitted in (sweep_value, seed) order regardless of input order. Fails on an
// empty record list.
absl::StatusOr<std::string> FormatSweepCsv(std::vector<TrialRecord> records);
absl::StatusOr<std::string> FormatSummaryCsv(
    const std::vector<SweepSummary>& summary);

absl::Status WriteSweepCsv(const std::vector<TrialRecord>& records,
                           const std::string& path);
absl::Status WriteSummaryCsv(const std::vector<SweepSummary>& summary,
                             const std::string& path);

// Lines of `key = value`; `#` starts a comment. Unknown keys are errors.
// Keys not mentioned keep the values from `base`.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(
    const std::string& text, const ExperimentConfig& base = {});
absl::StatusOr<ExperimentConfig> ReadExperimentConfig(
    const std::string& path, const ExperimentConfig& base = {});

// Applies one key. Shared by the file parser and CLI overrides.
absl::Status SetConfigValue(ExperimentConfig& config, const std::string& key,
                            const std::string& value);

// Inverse of ParseExperimentConfig.
std::string FormatExperimentConfig(const ExperimentConfig& config);

// Panel configs: nonprivate-sigma, nonprivate-m, nonprivate-t, nonprivate-n,
// private-t, two-peak.
absl::StatusOr<ExperimentConfig> PresetConfig(const std::string& name);
std::vector<std::string> PresetNames();

}  // namespace heatcloak

#endif  // HEATCLOAK_EXPERIMENT_IO_H_
