#include "core/rng.hpp"

#include <algorithm>
#include <numeric>

namespace rankgauge {

std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                    std::size_t n,
                                                    std::uint64_t seed) {
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  if (n >= population) return pool;

  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(rng.next_below(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace rankgauge
