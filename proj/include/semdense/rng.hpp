#pragma once

#include <cstdint>

namespace semdense {

// splitmix64. The corpus generator is specified in terms of this exact
// stream so that replays outside C++ (scripts/corpus_histogram_oracle.py)
// see identical draws.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Draw in [0, n). Plain modulo; the bias is irrelevant here and keeps the
  // stream trivially reproducible.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }
};

}  // namespace semdense
