// Reproducible random streams.
//
// Every replica r of a run with seed s draws from its own std::mt19937_64
// seeded with splitmix64(splitmix64(s) ^ splitmix64(r + 1)). No global state:
// the same (s, r) yields the same numbers on every platform, in any thread.
#pragma once

#include <cstdint>
#include <random>

namespace ldconc {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t replica) {
  return splitmix64(splitmix64(seed) ^ splitmix64(replica + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t replica) : engine_(substream_seed(seed, replica)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Fair ±1 from the top bit.
  int sign() { return (engine_() >> 63) ? 1 : -1; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ldconc
