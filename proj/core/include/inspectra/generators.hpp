#pragma once

#include <cstddef>
#include <cstdint>

#include "inspectra/curve.hpp"
#include "inspectra/random.hpp"

namespace inspectra {

/// The four unit semicircles in the planes z = 1, x = -1, z = -1, x = 1,
/// joined C^1 and lying on the sphere of radius sqrt(2); `per_arc` vertices
/// per semicircle, closed.
Polyline baseball_curve(std::size_t per_arc);

/// Planar circle of radius R about o in the x1-x2 plane of R^dim (dim >= 2).
/// With perimeter_match the polygon's vertex radius is R (pi/N) / sin(pi/N),
/// so its perimeter equals 2 pi R and its horizon error is O(N^-4); otherwise
/// the vertices lie on the circle.
Polyline circle_curve(double radius, std::size_t vertices, int dim = 3,
                      bool perimeter_match = true);

/// Closed curve in R^3 whose convex hull contains the unit sphere: random
/// anchor points on spheres of radius in [1.25, 2.5], visited along a greedy
/// nearest-neighbour tour, each edge subdivided into `subdivide` pieces.
/// Retries with a new key until the exact 3-D containment test passes.
Polyline random_inspection_curve(std::uint64_t seed, std::size_t anchors = 24,
                                 std::size_t subdivide = 1);

/// Baseball curve resampled to `vertices` points plus Gaussian noise of
/// standard deviation sigma per coordinate.
Polyline noisy_baseball(std::size_t vertices, double sigma, std::uint64_t seed);

/// random_inspection_curve scaled about o to the requested length (only
/// enlarging, so containment is kept).
Polyline random_loop(std::uint64_t seed, std::size_t vertices, double target_length);

}  // namespace inspectra
