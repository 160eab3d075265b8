#pragma once

#include <cstdint>

namespace cc {

/// Counter-based deterministic generator keyed by (seed, stream).  Draws are a
/// pure function of (key, counter), so disjoint streams can be consumed by any
/// number of workers with identical results.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed + 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xd1b54a32d192ed03ull))) {}

  std::uint64_t next_u64() { return mix(key_ + (ctr_++) * 0x9e3779b97f4a7c15ull); }

  /// Uniform in [0, 1).
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace cc
