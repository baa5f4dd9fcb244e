#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ctb {

// Seeded random stream. All sampling goes through this wrapper instead of
// std distributions so that a given seed always produces the same sequence,
// independent of the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Derived stream: one root seed, split by (stream, substream) counters so
  // each replication is reproducible in isolation.
  Rng(std::uint64_t root, std::uint64_t stream, std::uint64_t substream) {
    std::seed_seq seq{root, stream, substream};
    eng_.seed(seq);
  }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi], unbiased.
  int uniform_int(int lo, int hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    for (;;) {
      const std::uint64_t x = eng_();
      const std::uint64_t r = x % range;
      if (x - r <= ~std::uint64_t{0} - range + 1) {
        return lo + static_cast<int>(r);
      }
    }
  }

  // Standard normal via Box-Muller; second value of each pair is cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = radius * std::sin(two_pi * u2);
    have_spare_ = true;
    return radius * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ctb
