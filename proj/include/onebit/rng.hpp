// Copyright 2026 The onebit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ONEBIT_RNG_HPP_
#define ONEBIT_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace onebit {

using Rng = std::mt19937_64;

// Derives an independent seed for a named component (mask, truth,
// observations, folds, ...) from one master seed, so each component can be
// varied without perturbing the others.
std::uint64_t substream(std::uint64_t master, std::string_view tag,
                        std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

// Uniform double in [0, 1) with 53 random bits; unlike
// std::uniform_real_distribution its output is fixed across standard
// libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection, n > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - Rng::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Fisher-Yates with uniform_index, reproducible across standard libraries.
template <typename T>
void shuffle(T& range, Rng& rng) {
  const auto size = static_cast<std::uint64_t>(range.size());
  for (std::uint64_t i = size; i > 1; --i) {
    using std::swap;
    swap(range[i - 1], range[uniform_index(rng, i)]);
  }
}

// Box-Muller draw; consumes two uniforms per call.
inline double standard_normal(Rng& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace onebit

#endif  // ONEBIT_RNG_HPP_
