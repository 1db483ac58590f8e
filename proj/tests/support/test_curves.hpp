#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "inspectra/curve.hpp"
#include "inspectra/random.hpp"

namespace inspectra::fixtures {

/// Smooth closed curve gamma(t) = c + sum_{k<=3} a_k cos kt + b_k sin kt in
/// R^3, sampled at `vertices` points, drawn until min |gamma| >= min_radius.
/// Resampled to equal chords so refinement sequences stay comparable.
inline Polyline random_fourier_curve(std::uint64_t seed, std::size_t vertices,
                                     double min_radius = 0.5) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    CounterRng rng(seed, attempt);
    Eigen::Vector3d c;
    for (int i = 0; i < 3; ++i) c[i] = rng.uniform(-0.8, 0.8);
    Eigen::Matrix<double, 3, 6> coef;
    for (int k = 0; k < 3; ++k) {
      const double amp = 1.0 / (k + 1.0);
      for (int i = 0; i < 3; ++i) {
        coef(i, 2 * k) = amp * rng.normal();
        coef(i, 2 * k + 1) = amp * rng.normal();
      }
    }
    const std::size_t fine = 4 * vertices;
    std::vector<Point> pts;
    double rmin = 1e300;
    for (std::size_t j = 0; j < fine; ++j) {
      const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(fine);
      Eigen::Vector3d p = c;
      for (int k = 0; k < 3; ++k) {
        p += coef.col(2 * k) * std::cos((k + 1) * t) + coef.col(2 * k + 1) * std::sin((k + 1) * t);
      }
      rmin = std::min(rmin, p.norm());
      pts.emplace_back(p);
    }
    if (rmin < min_radius) continue;
    return resample_constant_speed(Polyline(std::move(pts), true), vertices);
  }
}

}  // namespace inspectra::fixtures
