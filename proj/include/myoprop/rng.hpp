#pragma once

#include <cmath>
#include <cstdint>

namespace myo {

// SplitMix64 generator (Steele, Lea & Flood). Chosen because the update is
// a fixed, published constant sequence, so streams reproduce exactly from a
// 64-bit seed on any platform. Normal variates use the Box-Muller transform
// and always consume exactly two uniforms, which keeps draw counts stable
// when code adds or removes intermediate draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; discards the sine companion.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Derive an independent stream for (seed, index) pairs; used by the
  // synthetic generator so each frame is reproducible in isolation.
  static Rng for_index(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0xA0761D6478BD642Full * (index + 1)));
    return Rng(mixer.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace myo
