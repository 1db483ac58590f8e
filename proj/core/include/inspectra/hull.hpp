#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "inspectra/curve.hpp"
#include "inspectra/random.hpp"

namespace inspectra {

struct Facet {
  Point normal;  ///< unit outward normal
  double offset; ///< support value: max over generating points of <normal, v>
};

/// Half-space description of a convex hull: {x : <u_f, x> <= b_f for all f}.
struct HullFacets {
  int dim = 3;
  std::vector<Facet> facets;
  /// Indices (into the generating point list) of the hull's extreme points.
  std::vector<std::size_t> extreme_indices;
};

enum class InradiusKind { exact, lower_bound, upper_bound };

struct InradiusResult {
  double radius = 0.0;
  Point center;
  InradiusKind kind = InradiusKind::exact;
  std::optional<Point> witness_direction;
};

/// Incremental 3-D hull. Coplanar facets with the same normal are merged, so
/// a cube yields 6 facets. Throws DegenerateHull when the points do not
/// span R^3.
HullFacets convex_hull_3d(std::span<const Point> points);

/// Affine rank of a point set (singular values above 1e-10 of the largest).
int affine_rank(std::span<const Point> points);

/// Largest inscribed ball: maximize rho s.t. <u_f, x> + rho <= b_f, solved
/// through its dual with solve_standard_lp. Throws MalformedHull when the
/// region is empty or unbounded.
InradiusResult chebyshev_inradius(const HullFacets& hull);

/// Support function h(u) = max_i <p_i, u>, exact over the given points.
double support(std::span<const Point> points, const Point& u);

struct MinimaxOptions {
  int restarts = 64;
  int iters = 300;
  std::uint64_t seed = kDefaultSeed;
  /// Local sequential-LP refinement of the best restarts.
  bool polish = true;
};

struct SupportMinimum {
  Point direction;  ///< unit vector
  double value = 0.0;
  int restart = -1; ///< index of the winning restart (ties: lowest)
};

/// Multi-start minimization of h(u) over the unit sphere. Each restart runs
/// projected gradient descent with step halving on a log-sum-exp smoothing
/// whose temperature shrinks geometrically; the best restarts are refined by
/// trust-region sequential LP. The returned value is h evaluated exactly at
/// the returned direction.
SupportMinimum minimize_support(std::span<const Point> points, const MinimaxOptions& opts = {});

/// Trust-region sequential-LP descent of h from a starting direction.
Point polish_direction(std::span<const Point> points, const Point& start, int max_steps = 60);

/// Origin-centred inradius upper bound min_u h(u). Throws OriginNotInterior
/// when the minimum found is <= 0.
InradiusResult origin_inradius_minimax(std::span<const Point> points, int restarts = 64,
                                       int iters = 300);

struct SphereContainment {
  bool contains = false;
  double min_slack = 0.0;  ///< min over tested u of h(u) - 1
  Point worst_direction;
};

inline constexpr double kContainmentTol = 1e-7;

/// Tests h(u) >= 1 over `directions` deterministic sample directions, then
/// refines the worst ones locally. In R^3 the hull's facet normals are added
/// to the candidates, which makes the test exact for full-dimensional hulls.
SphereContainment contains_unit_sphere(std::span<const Point> points, int directions);

/// Deterministic near-uniform directions on S^2 (Fibonacci lattice).
std::vector<Point> fibonacci_sphere(int count);

/// Vertices of the icosahedron subdivided `level` times, projected to S^2
/// (12, 42, 162, 642, ... points).
std::vector<Point> icosphere(int level);

/// Deterministic directions on S^{dim-1}; the Fibonacci lattice when dim = 3.
std::vector<Point> sphere_directions(int dim, int count, std::uint64_t seed = kDefaultSeed);

/// {"dim": n, "facets": [{"normal": [...], "offset": b}, ...]}
std::string hull_to_json(const HullFacets& hull);

}  // namespace inspectra
