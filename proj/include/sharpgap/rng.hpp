// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace sharpgap {

/// SplitMix64 generator. Every seeded construction in the library (random
/// codes, sampled repetition, expander offsets) draws from this so results are
/// reproducible across platforms.
class SplitMix64 {
public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound) by rejection; bound must be nonzero.
  uint64_t below(uint64_t bound) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

private:
  uint64_t state_;
};

} // namespace sharpgap
