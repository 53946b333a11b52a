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

#include "heatcloak/random.h"

#include <cmath>
#include <numbers>

namespace heatcloak {

double CounterUniform(uint64_t seed, uint64_t a, uint64_t b) {
  return UniformOpen(CounterHash(seed, a, b));
}

double CounterGaussian(uint64_t seed, uint64_t index) {
  const double u1 = UniformOpen(CounterHash(seed, index, 1));
  const double u2 = UniformOpen(CounterHash(seed, index, 2));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace heatcloak
