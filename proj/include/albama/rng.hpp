#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace albama {

// Counter-based uniform generator (SplitMix64). Output i is a fixed mixing
// function of seed + i*gamma, so draws are identical on every platform and
// independent of how work is scheduled across threads. All seeded results in
// this library go through this generator; do not swap it out without
// re-freezing the seeded test expectations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0,1]: 53-bit resolution, never exactly zero so log() is safe.
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform index in [0, n). Plain modulo: the bias for n << 2^64 is far
  // below anything observable here, and the draw sequence stays frozen.
  std::size_t next_index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % n);
  }

 private:
  std::uint64_t state_;
};

// Child seed for stream `stream` of a base seed. One extra mixing step keyed
// by the stream id keeps per-tree and per-period generators decorrelated and
// reproducible regardless of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  SplitMix64 g(base ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  return g.next_u64();
}

// Standard normal variates: Box-Muller transform over SplitMix64 uniforms.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = gen_.next_unit();
    const double u2 = gen_.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

 private:
  SplitMix64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace albama
