// Copyright (c) 2026 rawnet3-cpp project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RAWNET3_RNG_HPP_
#define RAWNET3_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace rawnet3 {

// Deterministic RNG. The engine is std::mt19937_64 (its output sequence is
// pinned by the standard); distributions are implemented here because the
// stdlib distribution algorithms are implementation-defined and would break
// bit-reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  uint64_t uniform_int(uint64_t n) {
    // Rejection-free modulo is biased for huge n; n here is always small
    // (corpus sizes, offsets), so 128-bit multiply scaling is exact enough.
    return static_cast<uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Standard normal via Box-Muller (cached second value).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Guard u1 = 0.
    u1 = u1 > 0 ? u1 : 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Derives an independent stream from (seed, stream ids) without sharing
  // state; splitmix64 finalizer over the mixed words.
  static uint64_t derive(uint64_t seed, uint64_t a, uint64_t b = 0,
                         uint64_t c = 0) {
    uint64_t x = seed;
    for (uint64_t w : {a + 0x9e3779b97f4a7c15ULL, b + 0xbf58476d1ce4e5b9ULL,
                       c + 0x94d049bb133111ebULL}) {
      x += w;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      x = x ^ (x >> 31);
    }
    return x;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rawnet3

#endif  // RAWNET3_RNG_HPP_
