#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace zap {

inline constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ull;

// Derived seed for independent trial k of an experiment with a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) {
  return master ^ ((k + 1) * kSeedStride);
}

// Seeded generator with explicit distribution code so that outputs are
// identical across standard library implementations (std:: distributions are
// implementation defined, the engine itself is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Standard normal via the polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double v1 = 0.0;
    double v2 = 0.0;
    double s = 0.0;
    do {
      v1 = 2.0 * uniform01() - 1.0;
      v2 = 2.0 * uniform01() - 1.0;
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * f;
    has_spare_ = true;
    return v1 * f;
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = eng_();
    while (v >= limit) v = eng_();
    return v % n;
  }

  // Uniform over {-1, 0, +1}.
  int sign_trit() { return static_cast<int>(uniform_below(3)) - 1; }

  // Uniform over {-1, +1}.
  int sign_bit() { return uniform_below(2) == 0 ? -1 : 1; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace zap
