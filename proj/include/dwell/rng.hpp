// Copyright 2026-present the dwell project
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

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dwell {

/// SplitMix64 finalizer (Steele/Lea/Flood). Used only for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream k of master seed s. Independent streams for concurrent trials
/// all derive from one published seed; the scheme is
/// sub_seed = splitmix64(seed + k * golden_gamma).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + stream * 0x9e3779b97f4a7c15ULL);
}

/// Deterministic draws on top of mt19937_64. Distribution transforms are
/// explicit inverse-CDF one-liners so that a (seed, stream) pair always
/// reproduces the same values on a given build; std::*_distribution is
/// avoided because its algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  Rng(std::uint64_t seed, std::uint64_t stream)
      : engine_(derive_seed(seed, stream)) {}

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi]; degenerate lo == hi returns lo exactly.
  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    return lo + (hi - lo) * uniform();
  }

  /// Exponential with the given mean; mean == 0 returns 0 exactly.
  double exponential(double mean) {
    if (mean == 0.0) return 0.0;
    return -mean * std::log1p(-uniform());
  }

  /// Uniform angle in [0, 2*pi).
  double angle() { return 2.0 * std::numbers::pi * uniform(); }

  /// +1 or -1 with equal probability.
  double sign() { return (engine_() & 1u) ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dwell
