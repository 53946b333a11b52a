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

#include "heatcloak/operator_io.h"

#include <fstream>
#include <sstream>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace heatcloak {
namespace {

constexpr char kOperatorHeader[] = "kind,rows,cols,T,mu,t";

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    line = absl::StripTrailingAsciiWhitespace(line);
    if (!line.empty()) lines.emplace_back(line);
  }
  return lines;
}

absl::StatusOr<double> ParseDouble(absl::string_view field) {
  double value = 0.0;
  if (!absl::SimpleAtod(absl::StripAsciiWhitespace(field), &value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("not a number: '", field, "'"));
  }
  return value;
}

}  // namespace

std::string FormatOperatorCsv(const DiffusionOperator& op) {
  std::string out = absl::StrCat(kOperatorHeader, "\n");
  absl::StrAppendFormat(
      &out, "%s,%d,%d,%.17g,%.17g,%.17g\n",
      op.kind == OperatorKind::kInterval ? "interval" : "graph",
      op.matrix.rows(), op.matrix.cols(), op.effective_time, op.mu, op.t);
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
      absl::StrAppendFormat(&out, j == 0 ? "%.17g" : ",%.17g", op.matrix(i, j));
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<DiffusionOperator> ParseOperatorCsv(const std::string& text) {
  const std::vector<std::string> lines = Lines(text);
  if (lines.size() < 2 || lines[0] != kOperatorHeader) {
    return absl::InvalidArgumentError(
        absl::StrCat("operator CSV must start with '", kOperatorHeader, "'"));
  }
  std::vector<std::string> meta = absl::StrSplit(lines[1], ',');
  if (meta.size() != 6) {
    return absl::InvalidArgumentError("operator metadata needs 6 fields");
  }
  DiffusionOperator op;
  if (meta[0] == "interval") {
    op.kind = OperatorKind::kInterval;
  } else if (meta[0] == "graph") {
    op.kind = OperatorKind::kGraph;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown operator kind '", meta[0], "'"));
  }
  int rows = 0;
  int cols = 0;
  if (!absl::SimpleAtoi(meta[1], &rows) || !absl::SimpleAtoi(meta[2], &cols) ||
      rows < 1 || cols < 1) {
    return absl::InvalidArgumentError("bad operator dimensions");
  }
  std::vector<double> params;
  for (int k = 3; k < 6; ++k) {
    absl::StatusOr<double> v = ParseDouble(meta[k]);
    if (!v.ok()) return v.status();
    params.push_back(*v);
  }
  op.effective_time = params[0];
  op.mu = params[1];
  op.t = params[2];
  if (static_cast<int>(lines.size()) != rows + 2) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "expected %d matrix rows, found %d", rows, lines.size() - 2));
  }
  op.matrix.resize(rows, cols);
  for (int i = 0; i < rows; ++i) {
    std::vector<absl::string_view> fields = absl::StrSplit(lines[i + 2], ',');
    if (static_cast<int>(fields.size()) != cols) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d has %d fields, expected %d", i, fields.size(), cols));
    }
    for (int j = 0; j < cols; ++j) {
      absl::StatusOr<double> v = ParseDouble(fields[j]);
      if (!v.ok()) return v.status();
      op.matrix(i, j) = *v;
    }
  }
  return op;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("IoError: cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::UnavailableError(absl::StrCat("IoError: cannot write ", path));
  }
  out << contents;
  out.close();
  if (!out) {
    return absl::UnavailableError(absl::StrCat("IoError: write failed for ", path));
  }
  return absl::OkStatus();
}

absl::Status WriteOperatorCsv(const DiffusionOperator& op,
                              const std::string& path) {
  return WriteFile(path, FormatOperatorCsv(op));
}

absl::StatusOr<DiffusionOperator> ReadOperatorCsv(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseOperatorCsv(*text);
}

absl::Status WriteVectorCsv(const Eigen::VectorXd& v, const std::string& name,
                            const std::string& path) {
  std::string out = name + "\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    absl::StrAppendFormat(&out, "%.17g\n", v(i));
  }
  return WriteFile(path, out);
}

absl::StatusOr<Eigen::VectorXd> ReadVectorCsv(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  std::vector<std::string> lines = Lines(*text);
  if (lines.empty()) return absl::InvalidArgumentError("empty vector CSV");
  // A non-numeric first line is a header.
  size_t start = 0;
  double probe = 0.0;
  if (!absl::SimpleAtod(lines[0], &probe)) start = 1;
  Eigen::VectorXd v(static_cast<Eigen::Index>(lines.size() - start));
  for (size_t i = start; i < lines.size(); ++i) {
    absl::StatusOr<double> value = ParseDouble(lines[i]);
    if (!value.ok()) return value.status();
    v(static_cast<Eigen::Index>(i - start)) = *value;
  }
  return v;
}

}  // namespace heatcloak
