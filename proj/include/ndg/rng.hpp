#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ndg {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of replicate r: mix64(base + (r + 1) * golden). The golden gamma is odd, so distinct r map
// to distinct pre-images and therefore distinct seeds.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t replicate) noexcept {
  return mix64(base_seed + (replicate + 1) * kGoldenGamma);
}

// mt19937_64 (whose output sequence is fixed by the standard) with portable real conversions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Box–Muller; the second variate is discarded so each call consumes exactly two words.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ndg
