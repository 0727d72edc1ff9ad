#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tropsvm {

// Identifier written into metadata files so datasets can be traced back to
// the generator that produced them.
inline constexpr const char* kRngName = "tropsvm-rng-v1";

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic 64-bit generator. The engine is std::mt19937_64, whose
// output sequence is pinned by the C++ standard, and all variate mappings
// below are implemented from raw bits, so results are identical across
// platforms and standard libraries.
//
// Stream splitting: Rng::stream(base_seed, stream_id) seeds an independent
// generator with splitmix64 applied to (base_seed, stream_id). Consumers
// assign one stream per simulated tree so work can be reordered or
// parallelised without changing output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t base_seed, std::uint64_t stream_id) {
    std::uint64_t s = base_seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream_id * 0xda942042e4dd58b5ull;
    std::uint64_t b = splitmix64(s);
    return Rng(a ^ (b + 0x9e3779b97f4a7c15ull));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Exponential waiting time with the given rate (mean 1/rate).
  double exponential(double rate) {
    double u;
    do {
      u = uniform01();
    } while (u <= 0.0);
    return -std::log(u) / rate;
  }

  // Unbiased integer in [0, n) via bitmask rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint64_t mask = ~0ull >> __builtin_clzll((n - 1) | 1);
    std::uint64_t v;
    do {
      v = next_u64() & mask;
    } while (v >= n);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tropsvm
