#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace lagrising {

// Deterministic random stream: a seeded mt19937_64 plus fixed bit-to-double
// maps, so a given seed produces the same values on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Zero-mean Gaussian via Box-Muller; the second deviate is cached.
  double normal(double sigma) {
    if (have_spare_) {
      have_spare_ = false;
      return sigma * spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return sigma * r * std::cos(theta);
  }

  // Uniform index in [0, n); Lemire multiply-shift, no modulo bias to speak of.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lagrising
