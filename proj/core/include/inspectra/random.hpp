#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Core>

namespace inspectra {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the stream is a pure function of (seed, key), so
/// sample i can be regenerated anywhere without replaying samples 0..i-1.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t key) noexcept
      : base_(mix64(mix64(seed) ^ (key * 0xD1B54A32D192ED03ULL))) {}

  constexpr std::uint64_t next_u64() noexcept { return mix64(base_ + counter_++); }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal by Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  Eigen::VectorXd normal_vector(int dim) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = normal();
    return x;
  }

  /// Uniform on the unit sphere S^{dim-1}.
  Eigen::VectorXd unit_vector(int dim) {
    for (;;) {
      Eigen::VectorXd x = normal_vector(dim);
      const double n = x.norm();
      if (n > 1e-300) return x / n;
    }
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace inspectra
