#pragma once

#include <cstdint>

namespace ehs {

// Counter-based splitmix64 ("splitmix64-ctr"). Stateless given (seed, counter),
// so property samples are reproducible across platforms and reorderings.
inline std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + counter * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct CounterRng {
  std::uint64_t seed = 0;
  std::uint64_t ctr = 0;

  explicit CounterRng(std::uint64_t s = 0) : seed(s) {}

  std::uint64_t next_u64() { return splitmix64(seed, ctr++); }

  // uniform in [0,1)
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }
};

} // namespace ehs
