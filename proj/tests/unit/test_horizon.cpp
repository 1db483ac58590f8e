#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "inspectra/error.hpp"
#include "inspectra/generators.hpp"
#include "inspectra/horizon.hpp"

using namespace inspectra;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Cap, AreaFormula) {
  EXPECT_EQ(cap_area(Eigen::Vector3d(0.5, 0, 0)), 0.0);
  EXPECT_EQ(cap_area(Eigen::Vector3d(0, 1, 0)), 0.0);
  EXPECT_NEAR(cap_area(Eigen::Vector3d(0, 0, 2)), kPi, 1e-15);
  EXPECT_NEAR(cap_area(Eigen::Vector3d(3, 4, 0)), 2 * kPi * 0.8, 1e-14);
}

TEST(Cap, IntersectionLimits) {
  const Eigen::Vector3d a(0, 0, 2);
  // Same point: intersection is the cap itself.
  EXPECT_NEAR(cap_intersection_area(a, a), cap_area(a), 1e-9);
  // Nested caps along one axis.
  EXPECT_NEAR(cap_intersection_area(a, Eigen::Vector3d(0, 0, 5)), cap_area(a), 1e-9);
  // Opposite caps are disjoint.
  EXPECT_NEAR(cap_intersection_area(a, -a), 0.0, 1e-12);
  // Symmetric in its arguments.
  const Eigen::Vector3d b(1.5, 0.3, 0.9);
  EXPECT_NEAR(cap_intersection_area(a, b), cap_intersection_area(b, a), 1e-10);
}

TEST(Cap, IntersectionMatchesMonteCarlo) {
  const Eigen::Vector3d a(0, 0, 1.7), b(1.2, 0, 1.1);
  long hit = 0;
  const long n = 400000;
  for (long i = 0; i < n; ++i) {
    CounterRng rng(11, static_cast<std::uint64_t>(i));
    const Eigen::Vector3d p = rng.unit_vector(3);
    if (a.dot(p) > 1 && b.dot(p) > 1) ++hit;
  }
  const double m = 4 * kPi * static_cast<double>(hit) / n;
  const double se = 4 * kPi * std::sqrt((hit / double(n)) * (1 - hit / double(n)) / n);
  EXPECT_NEAR(cap_intersection_area(a, b), m, 4 * se);
}

TEST(SegmentHorizon, RadialSegmentIsCapDifference) {
  const Eigen::Vector3d a(0, 0, 1.5), b(0, 0, 3);
  EXPECT_NEAR(segment_horizon(a, b), cap_area(b) - cap_area(a), 1e-9);
  EXPECT_NEAR(segment_horizon(b, a), segment_horizon(a, b), 1e-12);
  // Inside the sphere the tangent planes never meet the segment.
  EXPECT_EQ(segment_horizon(Eigen::Vector3d(0.1, 0, 0), Eigen::Vector3d(0, 0.5, 0)), 0.0);
}

TEST(Horizon, CircleFormula) {
  for (double R : {1.1, std::numbers::sqrt2, 2.0, 10.0}) {
    const double h = horizon(circle_curve(R, 10000)).total;
    EXPECT_NEAR(h, 8 * kPi * std::sqrt(1 - 1 / (R * R)), 1e-6) << "R = " << R;
  }
}

TEST(Horizon, BaseballFrozen) {
  const Polyline b = baseball_curve(500);
  const HorizonReport h = horizon(b);
  EXPECT_NEAR(h.total, 25.132699886974116, 1e-9);
  ASSERT_EQ(h.per_segment.size(), b.segment_count());
  double sum = 0;
  for (double s : h.per_segment) {
    EXPECT_GE(s, 0.0);
    sum += s;
  }
  EXPECT_NEAR(sum, h.total, 1e-12);
  EXPECT_NEAR(efficiency(b).efficiency, 2.0, 1e-9);
}

TEST(Horizon, PlanarInputIsLifted) {
  std::vector<Point> v3, v2;
  for (int i = 0; i < 50; ++i) {
    const double t = 2 * kPi * i / 50;
    v3.push_back(Eigen::Vector3d(2 * std::cos(t), 2 * std::sin(t), 0));
    v2.push_back(Eigen::Vector2d(2 * std::cos(t), 2 * std::sin(t)));
  }
  EXPECT_NEAR(horizon(Polyline(v2, true)).total, horizon(Polyline(v3, true)).total, 1e-12);
}

TEST(Horizon, UnsupportedDimension) {
  const Polyline p4({Point::Zero(4), Point::Ones(4)}, false);
  EXPECT_THROW(horizon(p4), UnsupportedDimension);
}

TEST(HorizonMc, AgreesWithExactAndIsDeterministic) {
  const Polyline c = random_inspection_curve(5);
  const double exact = horizon(c).total;
  const HorizonReport mc = horizon_mc(c, 200000, 9);
  EXPECT_NEAR(mc.total, exact, 4 * *mc.mc_stderr);
  EXPECT_EQ(horizon_mc(c, 200000, 9).total, mc.total);
  EXPECT_EQ(mc.method, HorizonMethod::monte_carlo);
}

TEST(CrossingCount, TangentPlaneCountsOnCircle) {
  const Polyline c = circle_curve(2.0, 400);
  // The equatorial tangent plane at p = e1 is x = 1, which cuts the circle
  // of radius 2 twice.
  EXPECT_EQ(crossing_count(c, Eigen::Vector3d(1, 0, 0)), 2);
  EXPECT_EQ(crossing_count(c, Eigen::Vector3d(0, 0, 1)), 0);
}
