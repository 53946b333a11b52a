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

// Plain-text formats for operators and vectors.
//
// Operator CSV (dense, row-major):
//   kind,rows,cols,T,mu,t
//   interval,50,100,0.5,0.5,1
//   A(0,0),A(0,1),...
//   ...
// Vector CSV: one header line naming the column, then one value per line.
// Values are written with 17 significant digits so they read back exactly.

#ifndef HEATCLOAK_OPERATOR_IO_H_
#define HEATCLOAK_OPERATOR_IO_H_

#include <string>

#include "Eigen/Core"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "heatcloak/diffusion.h"

namespace heatcloak {

std::string FormatOperatorCsv(const DiffusionOperator& op);
absl::StatusOr<DiffusionOperator> ParseOperatorCsv(const std::string& text);

absl::Status WriteOperatorCsv(const DiffusionOperator& op,
                              const std::string& path);
absl::StatusOr<DiffusionOperator> ReadOperatorCsv(const std::string& path);

absl::Status WriteVectorCsv(const Eigen::VectorXd& v, const std::string& name,
                            const std::string& path);
absl::StatusOr<Eigen::VectorXd> ReadVectorCsv(const std::string& path);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, const std::string& contents);

}  // namespace heatcloak

#endif  // HEATCLOAK_OPERATOR_IO_H_
