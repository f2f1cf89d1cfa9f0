#pragma once

#include <cstdint>
#include <vector>

namespace rankgauge {

// Small portable generator so sampling is reproducible across platforms and
// standard-library versions (std::uniform_int_distribution is
// implementation-defined).
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

  // Uniform double in [0, 1) with 53 bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t splitmix64_once(std::uint64_t x) {
  SplitMix64 g(x);
  return g.next();
}

// n distinct indices from [0, population), uniformly, returned in ascending
// order. Partial Fisher-Yates, so every n-subset is equally likely.
std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                    std::size_t n,
                                                    std::uint64_t seed);

}  // namespace rankgauge
