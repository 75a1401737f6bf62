#pragma once

#include <cmath>
#include <cstdint>

#include "optstop/math.hpp"

namespace optstop {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with splitmix64 seeding. Gaussian and exponential draws use
// inverse-CDF sampling so every variate consumes exactly one uniform; this
// keeps per-path stream consumption fixed, which is what makes common random
// numbers across thresholds/levels effective.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return normal_quantile(uniform()); }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Tags separating independent uses of the same master seed. Streams that must
// be coupled (common random numbers) share both the tag and the path index.
enum class StreamKind : std::uint64_t {
  PathSampler = 0x01,
  JumpSkeleton = 0x02,
  Diffusion = 0x03,
  Sweep = 0x04,
  ValueGrid = 0x05,
  OneStep = 0x06,
  Realization = 0x07,
};

// Derives a path substream deterministically from (master seed, kind, index).
inline Rng substream(std::uint64_t master, StreamKind kind, std::uint64_t index) {
  std::uint64_t sm = master;
  const std::uint64_t a = splitmix64(sm);
  sm = a ^ (static_cast<std::uint64_t>(kind) * 0x9e3779b97f4a7c15ULL);
  const std::uint64_t b = splitmix64(sm);
  sm = b + index;
  const std::uint64_t c = splitmix64(sm);
  return Rng(c);
}

}  // namespace optstop
