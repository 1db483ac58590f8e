#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "inspectra/curve.hpp"

namespace inspectra {

enum class HorizonMethod { exact, monte_carlo };

/// Measure on S^2, with multiplicity, of the points p whose tangent plane
/// {x : <x, p> = 1} meets the curve.
struct HorizonReport {
  double total = 0.0;
  std::vector<double> per_segment;
  HorizonMethod method = HorizonMethod::exact;
  std::optional<double> mc_stderr;
};

struct EfficiencyReport {
  double horizon = 0.0;
  double length = 0.0;
  double efficiency = 0.0;  ///< horizon / length
};

/// Area of the cap {p in S^2 : <A, p> > 1}: 0 when |A| <= 1, otherwise
/// 2 pi (1 - 1/|A|).
double cap_area(const Eigen::Vector3d& a);

/// Area of cap(A) intersected with cap(B), by adaptive Gauss-Legendre
/// quadrature over the polar angle about A's axis with `quad_points` nodes
/// per panel (>= 16). Absolute error target 1e-9 * 4 pi.
double cap_intersection_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                             int quad_points = 16);

/// Horizon of the segment AB: the tangent plane at p crosses AB exactly when p
/// lies in the symmetric difference of cap(A) and cap(B).
double segment_horizon(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

/// Exact (quadrature) horizon of a polyline in R^2 (lifted to z = 0) or R^3.
/// Throws UnsupportedDimension otherwise.
HorizonReport horizon(const Polyline& poly);

/// Monte Carlo estimate: sample p uniformly on S^2 and count strict sign
/// changes of <gamma_j, p> - 1 along the chain (zeros take the next nonzero
/// sign). Sample i draws from CounterRng(seed, i).
HorizonReport horizon_mc(const Polyline& poly, std::int64_t samples, std::uint64_t seed);

/// Number of tangent-plane crossings of the chain for one direction p.
int crossing_count(const Polyline& poly, const Eigen::Vector3d& p);

EfficiencyReport efficiency(const Polyline& poly);

/// Vertex in R^3 (planar inputs get z = 0).
Eigen::Vector3d lift3(const Point& p);

}  // namespace inspectra
