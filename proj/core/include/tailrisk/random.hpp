#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace tailrisk {

/// Deterministic generator used by every randomized routine in the library.
///
/// Distributions are generated from raw 64-bit words instead of the standard
/// <random> distribution adaptors, whose output is implementation-defined.
/// Two runs with the same seed produce the same stream on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seed-derivation contract for parallel replicates: run i uses
  /// base_seed XOR i, so results do not depend on scheduling order.
  static Rng derived(std::uint64_t base_seed, std::uint64_t run_index) {
    return Rng(base_seed ^ run_index);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform index in [0, n). Multiply-shift map; bias is O(n / 2^64).
  std::size_t uniform_index(std::size_t n) {
    using u128 = unsigned __int128;
    return static_cast<std::size_t>((u128(engine_()) * u128(n)) >> 64);
  }

  /// Integer uniform on the inclusive range [lo, hi].
  long uniform_int(long lo, long hi) {
    return lo + static_cast<long>(uniform_index(static_cast<std::size_t>(hi - lo + 1)));
  }

  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tailrisk
