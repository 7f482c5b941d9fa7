#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace doseopt {

// splitmix64 finalizer. Used for seed derivation so that nearby integer
// inputs land far apart in seed space.
inline std::uint64_t hash64_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash64_combine(std::uint64_t h, std::uint64_t v) {
  return hash64_mix(h ^ (hash64_mix(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// Deterministic draw stream over mt19937_64. The standard distribution
// objects are implementation defined, so every sampler here is written out
// explicitly; a given seed yields the same stream on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the paired deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Gamma(shape, scale 1), Marsaglia-Tsang squeeze; shape < 1 boosted.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
    if (shape < 1.0) {
      const double u = std::max(uniform(), 1e-300);
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = 0.0, v = 0.0;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // InvGamma(shape, rate): reciprocal of Gamma(shape, 1/rate).
  double inv_gamma(double shape, double rate) {
    if (!(rate >= 0.0)) throw std::invalid_argument("inv_gamma rate must be nonnegative");
    if (rate == 0.0) return 0.0;
    return rate / gamma(shape);
  }

  // Uniform integer in [0, bound), bound >= 1. Masked rejection keeps the
  // draw exact.
  std::uint64_t integer(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("integer bound must be >= 1");
    if (bound == 1) return 0;
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t r = eng_() & mask;
      if (r < bound) return r;
    }
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace doseopt
