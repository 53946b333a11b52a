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

#ifndef HEATCLOAK_TESTS_STATUS_MATCHERS_H_
#define HEATCLOAK_TESTS_STATUS_MATCHERS_H_

#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace heatcloak::testing {

inline const absl::Status& GetStatus(const absl::Status& s) { return s; }
template <typename T>
const absl::Status& GetStatus(const absl::StatusOr<T>& s) {
  return s.status();
}

MATCHER(IsOk, "is OK") {
  const absl::Status& status = GetStatus(arg);
  *result_listener << status;
  return status.ok();
}

// Matches on code and a substring of the message (the error tag).
MATCHER_P2(StatusIs, code, tag,
           "has code " + absl::StatusCodeToString(code) + " and mentions " +
               std::string(tag)) {
  const absl::Status& status = GetStatus(arg);
  *result_listener << status;
  return status.code() == code &&
         std::string(status.message()).find(tag) != std::string::npos;
}

}  // namespace heatcloak::testing

#define HC_ASSERT_OK(expr) ASSERT_THAT(expr, ::heatcloak::testing::IsOk())
#define HC_EXPECT_OK(expr) EXPECT_THAT(expr, ::heatcloak::testing::IsOk())

#endif  // HEATCLOAK_TESTS_STATUS_MATCHERS_H_
