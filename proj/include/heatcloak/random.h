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

// Counter-based pseudo-random draws. Every value is a pure function of
// (seed, counters), so streams can be regenerated in any order and split
// across threads without changing the output.

#ifndef HEATCLOAK_RANDOM_H_
#define HEATCLOAK_RANDOM_H_

#include <cstdint>

namespace heatcloak {

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr uint64_t CounterHash(uint64_t seed, uint64_t a, uint64_t b = 0) {
  return Mix64(Mix64(Mix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

// Uniform double in the open interval (0, 1) with 52 random bits.
constexpr double UniformOpen(uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Uniform in (0, 1) keyed by (seed, a, b).
double CounterUniform(uint64_t seed, uint64_t a, uint64_t b = 0);

// Standard normal keyed by (seed, index), drawn with the Box-Muller
// transform from two independent counter-based uniforms.
double CounterGaussian(uint64_t seed, uint64_t index);

}  // namespace heatcloak

#endif  // HEATCLOAK_RANDOM_H_
