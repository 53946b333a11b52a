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

#include <filesystem>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "heatcloak/operator_io.h"
#include "status_matchers.h"

namespace heatcloak {
namespace {

using ::heatcloak::testing::StatusIs;
using ::testing::HasSubstr;
using ::testing::StartsWith;

TrialRecord Record(double value, uint64_t seed) {
  TrialRecord r;
  r.sweep_var = "sigma";
  r.sweep_value = value;
  r.seed = seed;
  r.n = 100;
  r.m = 50;
  r.mu = 0.5;
  r.t = 1;
  r.T = 0.5;
  r.k = 1;
  r.emd_error = 1.0 / 3.0;
  r.converged = true;
  return r;
}

TEST(FormatSweepCsvTest, EmptyIsAnError) {
  EXPECT_FALSE(FormatSweepCsv({}).ok());
  EXPECT_FALSE(FormatSummaryCsv({}).ok());
}

TEST(FormatSweepCsvTest, OneRecordGivesTwoLines) {
  absl::StatusOr<std::string> csv = FormatSweepCsv({Record(0.1, 7)});
  HC_ASSERT_OK(csv);
  std::vector<std::string> lines = absl::StrSplit(*csv, '\n', absl::SkipEmpty());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0],
            "sweep_var,sweep_value,trial,seed,n,m,mu,t,T,k,sigma_mode,epsilon,"
            "delta,alpha,delta2,sigma_used,radius,emd_error,l2_error,"
            "iterations,converged,degenerate,wall_ms");
  EXPECT_THAT(lines[1], StartsWith("sigma,0.1,0,7,100,50,0.5,1,0.5,1,fixed,"));
  EXPECT_THAT(lines[1], HasSubstr(",0.333333333333,"));
  EXPECT_EQ(std::vector<std::string>(absl::StrSplit(lines[1], ',')).size(),
            SweepCsvColumns().size());
}

TEST(FormatSweepCsvTest, OrdersRowsAndIsStable) {
  const std::vector<TrialRecord> records = {Record(0.2, 1), Record(0.1, 9),
                                            Record(0.1, 3)};
  absl::StatusOr<std::string> a = FormatSweepCsv(records);
  absl::StatusOr<std::string> b =
      FormatSweepCsv({records[2], records[0], records[1]});
  HC_ASSERT_OK(a);
  EXPECT_EQ(*a, *b);
  std::vector<std::string> lines = absl::StrSplit(*a, '\n', absl::SkipEmpty());
  EXPECT_THAT(lines[1], StartsWith("sigma,0.1,0,3,"));
  EXPECT_THAT(lines[2], StartsWith("sigma,0.1,0,9,"));
  EXPECT_THAT(lines[3], StartsWith("sigma,0.2,0,1,"));
}

TEST(WriteSweepCsvTest, ReEmitIsByteIdentical) {
  const std::string dir = ::testing::TempDir();
  const std::vector<TrialRecord> records = {Record(0.1, 2), Record(0.4, 1)};
  HC_ASSERT_OK(WriteSweepCsv(records, dir + "/a.csv"));
  HC_ASSERT_OK(WriteSweepCsv(records, dir + "/b.csv"));
  EXPECT_EQ(*ReadFile(dir + "/a.csv"), *ReadFile(dir + "/b.csv"));
}

TEST(WriteSweepCsvTest, UnwritablePathIsIoError) {
  EXPECT_THAT(WriteSweepCsv({Record(0.1, 2)}, "/nonexistent/dir/x.csv"),
              StatusIs(absl::StatusCode::kUnavailable, "IoError"));
}

TEST(FormatSummaryCsvTest, TwelveSignificantDigits) {
  SweepSummary s;
  s.sweep_value = 0.05;
  s.mean_emd = 2.0 / 3.0;
  s.ci_lo = 0.5;
  s.ci_hi = 0.8333333333333333;
  s.mean_delta2 = 0.012219259533098865;
  EXPECT_EQ(*FormatSummaryCsv({s}),
            "sweep_value,mean_emd,ci_lo,ci_hi,mean_delta2\n"
            "0.05,0.666666666667,0.5,0.833333333333,0.0122192595331\n");
}

TEST(ExperimentConfigParseTest, ReadsKeysAndComments) {
  absl::StatusOr<ExperimentConfig> c = ParseExperimentConfig(
      "# panel b\n"
      "m = 20   # sensors\n"
      "sigma_mode = private\n"
      "sweep_var = epsilon\n"
      "sweep_values = 1, 2,4\n"
      "placement = uniform\n"
      "k = 3\n"
      "widen_infeasible = false\n"
      "seed = 18446744073709551615\n");
  HC_ASSERT_OK(c);
  EXPECT_EQ(c->m, 20);
  EXPECT_EQ(c->n, 100);
  EXPECT_EQ(c->sigma_mode, SigmaMode::kPrivate);
  EXPECT_EQ(c->sweep_values, (std::vector<double>{1, 2, 4}));
  EXPECT_EQ(c->placement, SourcePlacement::kUniformRandom);
  EXPECT_FALSE(c->widen_infeasible);
  EXPECT_EQ(c->seed, 18446744073709551615ULL);
  HC_EXPECT_OK(c->Validate());
}

TEST(ExperimentConfigParseTest, RejectsUnknownKeysAndBadValues) {
  EXPECT_THAT(ParseExperimentConfig("colour = red\n"),
              StatusIs(absl::StatusCode::kInvalidArgument, "colour"));
  EXPECT_THAT(ParseExperimentConfig("n = ten\n"),
              StatusIs(absl::StatusCode::kInvalidArgument, "line 1"));
  EXPECT_FALSE(ParseExperimentConfig("just words\n").ok());
}

TEST(ExperimentConfigParseTest, FormatRoundTrips) {
  for (const std::string& name : PresetNames()) {
    absl::StatusOr<ExperimentConfig> preset = PresetConfig(name);
    HC_ASSERT_OK(preset);
    HC_EXPECT_OK(preset->Validate()) << name;
    const std::string text = FormatExperimentConfig(*preset);
    absl::StatusOr<ExperimentConfig> back = ParseExperimentConfig(text);
    HC_ASSERT_OK(back);
    EXPECT_EQ(FormatExperimentConfig(*back), text) << name;
  }
  EXPECT_FALSE(PresetConfig("nonexistent").ok());
}

TEST(ExperimentConfigParseTest, PanelOverrides) {
  EXPECT_EQ(PresetConfig("nonprivate-t")->sigma, 0.2);
  EXPECT_EQ(PresetConfig("nonprivate-n")->sigma, 0.2);
  EXPECT_DOUBLE_EQ(PresetConfig("nonprivate-n")->EffectiveTime(), 0.05);
  EXPECT_EQ(PresetConfig("private-t")->sigma_mode, SigmaMode::kPrivate);
}

}  // namespace
}  // namespace heatcloak
