// Copyright 2026 the rcurves authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RCURVES_RNG_HPP
#define RCURVES_RNG_HPP

#include <cstdint>

namespace rcurves {

/// Deterministic splittable pseudo-random generator (splitmix64 core).
///
/// The same seed yields the same stream on every platform; `split(i)`
/// derives an independent child stream from (state, i), so Monte Carlo
/// trials can run in any order or in parallel and still be reproducible.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw in [0, n) by rejection; portable across platforms
  /// (unlike std::uniform_int_distribution).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t bound = UINT64_MAX - (UINT64_MAX % n + 1) % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x > bound);
    return x % n;
  }

  /// Independent child stream indexed by `index`; does not advance *this.
  SplitRng split(std::uint64_t index) const {
    std::uint64_t z = state_ ^ (0xD1B54A32D192ED03ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return SplitRng(z + 0x9E3779B97F4A7C15ULL * index);
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace rcurves

#endif  // RCURVES_RNG_HPP
