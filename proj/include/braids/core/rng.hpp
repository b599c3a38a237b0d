#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace braids {

/// Seedable draw source for the interleave. std::mt19937_64's output
/// sequence is fixed by the standard, and the bounded draw below avoids the
/// implementation-defined distributions, so a seed replays identically on
/// every platform.
class DrawRng {
 public:
  explicit DrawRng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = kMax - (kMax % bound + 1) % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x > limit);
    return x % bound;
  }

 private:
  // splitmix64 finalizer, so neighbouring seeds start far apart.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace braids
