// Copyright 2026 The expertgame Authors
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

#ifndef EXPERTGAME_RNG_H_
#define EXPERTGAME_RNG_H_

#include <cmath>
#include <cstdint>

namespace expertgame {

// Deterministic keyed pseudo-random stream (splitmix64 core).
//
// Every (seed, stream) pair yields an independent, reproducible sequence
// that depends only on the key — not on global state, thread scheduling, or
// the standard library's distribution implementations.  Parallel consumers
// are handed disjoint stream ids (replication index, sample-chunk index) and
// aggregation happens in id order, so results are bitwise identical for any
// worker count.
class RandomStream {
 public:
  RandomStream(uint64_t seed, uint64_t stream)
      : state_(Mix(Mix(seed + 0x9E3779B97F4A7C15ULL) ^
                   Mix(stream + 0xBF58476D1CE4E5B9ULL))) {}

  uint64_t NextU64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return Mix(state_);
  }

  // Uniform draw in [0, 1) with 53 random bits.
  double NextUniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; pairs are cached, so a sequence of
  // normal draws consumes a deterministic number of uniforms.
  double NextNormal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // First uniform shifted into (0, 1] so the logarithm is finite.
    double u1 = (static_cast<double>(NextU64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = NextUniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  static uint64_t Mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace expertgame

#endif  // EXPERTGAME_RNG_H_
