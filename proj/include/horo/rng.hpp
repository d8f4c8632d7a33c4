#pragma once

#include <cstdint>

namespace horo {

// splitmix64 generator. All randomness in the project flows from one of
// these seeded with a single 64-bit value, so runs are reproducible
// independent of the standard library's distribution implementations.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // uniform integer in [0, n); n > 0
  long uniform_int(long n) {
    return static_cast<long>(next() % static_cast<std::uint64_t>(n));
  }

  Rng fork() { return Rng(next()); }
};

}  // namespace horo
