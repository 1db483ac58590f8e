#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "inspectra/error.hpp"
#include "inspectra/generators.hpp"
#include "inspectra/hull.hpp"
#include "inspectra/lp.hpp"

using namespace inspectra;

namespace {

std::vector<Point> cube_corners() {
  std::vector<Point> v;
  for (int i = 0; i < 8; ++i) {
    v.push_back(Eigen::Vector3d(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1));
  }
  return v;
}

std::vector<Point> octahedron(double s = 1.0) {
  std::vector<Point> v;
  for (int i = 0; i < 3; ++i) {
    for (double sign : {1.0, -1.0}) {
      Point p = Point::Zero(3);
      p[i] = sign * s;
      v.push_back(p);
    }
  }
  return v;
}

}  // namespace

TEST(Lp, SmallProblemOptimum) {
  // min -x1 - 2 x2  s.t. x1 + x2 + s1 = 4, x2 + s2 = 3.
  Eigen::MatrixXd A(2, 4);
  A << 1, 1, 1, 0, 0, 1, 0, 1;
  const Eigen::VectorXd b = Eigen::Vector2d(4, 3);
  Eigen::VectorXd c(4);
  c << -1, -2, 0, 0;
  const LpSolution s = solve_standard_lp(A, b, c);
  ASSERT_EQ(s.status, LpStatus::optimal);
  EXPECT_NEAR(s.objective, -7.0, 1e-12);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.x[1], 3.0, 1e-12);
  // Strong duality.
  EXPECT_NEAR(b.dot(s.multipliers), s.objective, 1e-12);
}

TEST(Lp, DetectsInfeasibleAndUnbounded) {
  Eigen::MatrixXd A(1, 1);
  A << 1;
  EXPECT_EQ(solve_standard_lp(A, Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Ones(1)).status,
            LpStatus::infeasible);
  Eigen::MatrixXd B(1, 2);
  B << 1, -1;
  Eigen::VectorXd c(2);
  c << 0, -1;
  EXPECT_EQ(solve_standard_lp(B, Eigen::VectorXd::Ones(1), c).status, LpStatus::unbounded);
}

TEST(Hull, CubeHasSixMergedFacets) {
  const HullFacets h = convex_hull_3d(cube_corners());
  EXPECT_EQ(h.facets.size(), 6u);
  for (const auto& f : h.facets) EXPECT_NEAR(f.offset, 1.0, 1e-12);
  EXPECT_EQ(h.extreme_indices.size(), 8u);
}

TEST(Hull, InteriorPointsAreNotExtreme) {
  auto pts = cube_corners();
  pts.push_back(Eigen::Vector3d(0.1, 0.2, -0.3));
  const HullFacets h = convex_hull_3d(pts);
  EXPECT_EQ(h.extreme_indices.size(), 8u);
}

TEST(Hull, FlatInputThrowsDegenerate) {
  const Polyline c = circle_curve(1.0, 32);
  EXPECT_THROW(convex_hull_3d(c.vertices()), DegenerateHull);
  EXPECT_EQ(affine_rank(c.vertices()), 2);
}

TEST(Inradius, FrozenValues) {
  EXPECT_NEAR(chebyshev_inradius(convex_hull_3d(cube_corners())).radius, 1.0, 1e-12);
  EXPECT_NEAR(chebyshev_inradius(convex_hull_3d(octahedron())).radius, 1.0 / std::sqrt(3.0), 1e-12);
  // Regular tetrahedron with circumradius sqrt 3 has inradius 1/sqrt 3.
  const std::vector<Point> tet{Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, -1, -1),
                               Eigen::Vector3d(-1, 1, -1), Eigen::Vector3d(-1, -1, 1)};
  const InradiusResult r = chebyshev_inradius(convex_hull_3d(tet));
  EXPECT_NEAR(r.radius, 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_LT(r.center.norm(), 1e-12);
}

TEST(Inradius, OffCentreBox) {
  // Box [0,4] x [0,2] x [0,6]: the largest ball has radius 1.
  std::vector<Point> v;
  for (int i = 0; i < 8; ++i) v.push_back(Eigen::Vector3d(i & 1 ? 4 : 0, i & 2 ? 2 : 0, i & 4 ? 6 : 0));
  EXPECT_NEAR(chebyshev_inradius(convex_hull_3d(v)).radius, 1.0, 1e-12);
}

TEST(Inradius, BaseballFrozen) {
  const double r = chebyshev_inradius(convex_hull_3d(baseball_curve(500).vertices())).radius;
  EXPECT_NEAR(r, 0.999995065185003, 1e-10);
}

TEST(Support, OctahedronMinimum) {
  const SupportMinimum m = minimize_support(octahedron());
  EXPECT_NEAR(m.value, 1.0 / std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(m.direction.norm(), 1.0, 1e-12);
  EXPECT_NEAR(support(octahedron(), m.direction), m.value, 1e-15);
}

TEST(Support, OriginOutsideThrows) {
  const std::vector<Point> pts{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(2, 1, 0),
                               Eigen::Vector3d(2, 0, 1), Eigen::Vector3d(3, 0, 0)};
  EXPECT_THROW(origin_inradius_minimax(pts), OriginNotInterior);
}

TEST(Containment, ExactOnCubeAndOctahedron) {
  const SphereContainment cube = contains_unit_sphere(cube_corners(), 1000);
  EXPECT_TRUE(cube.contains);
  EXPECT_NEAR(cube.min_slack, 0.0, 1e-12);
  // Octahedron with vertices at distance sqrt 3 touches the sphere at its facets.
  EXPECT_TRUE(contains_unit_sphere(octahedron(std::sqrt(3.0)), 1000).contains);
  const SphereContainment small = contains_unit_sphere(octahedron(1.5), 1000);
  EXPECT_FALSE(small.contains);
  EXPECT_NEAR(small.min_slack, 1.5 / std::sqrt(3.0) - 1.0, 1e-9);
}

TEST(Directions, CountsAndUnitLength) {
  EXPECT_EQ(icosphere(0).size(), 12u);
  EXPECT_EQ(icosphere(3).size(), 642u);
  for (const auto& u : fibonacci_sphere(100)) EXPECT_NEAR(u.norm(), 1.0, 1e-12);
  const auto d5 = sphere_directions(5, 50, 3);
  ASSERT_EQ(d5.size(), 50u);
  EXPECT_EQ(d5.front().size(), 5);
  EXPECT_EQ(sphere_directions(5, 50, 3), d5);
}

TEST(Inradius, PlanarRhombusFromFacets) {
  // Rhombus with vertices (+-2, 0), (0, +-1): every edge is at distance 2/sqrt 5.
  HullFacets h;
  h.dim = 2;
  const double s = 1.0 / std::sqrt(5.0);
  for (double a : {1.0, -1.0}) {
    for (double b : {1.0, -1.0}) h.facets.push_back({Eigen::Vector2d(a * s, 2 * b * s), 2 * s});
  }
  EXPECT_NEAR(chebyshev_inradius(h).radius, 2.0 / std::sqrt(5.0), 1e-12);
}

TEST(Inradius, UnboundedFacetsThrow) {
  HullFacets h;
  h.dim = 2;
  h.facets.push_back({Eigen::Vector2d(1, 0), 1.0});
  EXPECT_THROW(chebyshev_inradius(h), MalformedHull);
}
