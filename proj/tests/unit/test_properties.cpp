#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

#include <Eigen/Geometry>

#include "inspectra/horizon.hpp"
#include "inspectra/hull.hpp"
#include "inspectra/unfolding.hpp"
#include "test_curves.hpp"

using namespace inspectra;

namespace {

constexpr double kPi = std::numbers::pi;

class RandomCurve : public ::testing::TestWithParam<std::uint64_t> {
 protected:
  Polyline curve() const { return fixtures::random_fourier_curve(GetParam(), 160); }
};

Polyline transform(const Polyline& p, const Eigen::Matrix3d& m, double scale = 1.0) {
  std::vector<Point> v;
  for (const auto& x : p.vertices()) v.emplace_back(scale * (m * x));
  return Polyline(std::move(v), p.closed());
}

Polyline reversed(const Polyline& p) {
  std::vector<Point> v(p.vertices().rbegin(), p.vertices().rend());
  return Polyline(std::move(v), p.closed());
}

// Exact radius of the largest ball about o inside the hull; 0 if o is outside.
double origin_inradius(const Polyline& p) {
  const HullFacets hull = convex_hull_3d(p.vertices());
  double r = 1e300;
  for (const auto& f : hull.facets) r = std::min(r, f.offset);
  return std::max(r, 0.0);
}

}  // namespace

TEST_P(RandomCurve, HorizonIsRotationAndReversalInvariant) {
  const Polyline c = curve();
  const double h = horizon(c).total;
  CounterRng rng(GetParam(), 99);
  const Eigen::Vector3d axis = rng.unit_vector(3);
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(rng.uniform(0, 2 * kPi), axis).toRotationMatrix();
  EXPECT_NEAR(horizon(transform(c, rot)).total, h, 1e-7 * std::max(1.0, h));
  EXPECT_NEAR(horizon(reversed(c)).total, h, 1e-7 * std::max(1.0, h));
  for (double s : horizon(c).per_segment) EXPECT_GE(s, 0.0);
}

TEST_P(RandomCurve, LengthAndHorizonBoundsWhenHullSurroundsOrigin) {
  const Polyline c = curve();
  const double r = origin_inradius(c);
  if (r <= 1e-6) GTEST_SKIP() << "origin outside hull";
  EXPECT_GE(length(c), 4 * kPi * r);
  // Scaled so the hull holds the unit ball.
  const Polyline s = transform(c, Eigen::Matrix3d::Identity(), (1 + 1e-9) / r);
  EXPECT_GE(horizon(s).total, 8 * kPi - 1e-7);
}

TEST_P(RandomCurve, UnfoldingPreservesRadiiAndChords) {
  const Polyline c = curve();
  const UnfoldedCurve u = unfold(c);
  ASSERT_EQ(u.size(), u.source.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    EXPECT_NEAR(u.planar[j].norm(), u.radius[j], 1e-12 * std::max(1.0, u.radius[j]));
    EXPECT_NEAR(u.radius[j], u.source[j].norm(), 1e-12 * std::max(1.0, u.radius[j]));
  }
  // Chords in the plane are no longer than in space, and the total matches
  // up to the angular discretisation.
  double planar_len = 0.0;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    const double chord = (u.source[j + 1] - u.source[j]).norm();
    const double pc = (u.planar[j + 1] - u.planar[j]).norm();
    EXPECT_NEAR(pc, chord, 1e-9 + 1e-6 * chord);
    planar_len += pc;
  }
  EXPECT_NEAR(planar_len, length(c), 1e-6 * length(c));
  EXPECT_LT(verify_alpha(c, u), 1e-2);
}

TEST_P(RandomCurve, ResamplingNeverLengthens) {
  const Polyline c = curve();
  for (std::size_t m : {8u, 33u, 100u, 159u, 400u}) {
    EXPECT_LE(length(resample_constant_speed(c, m)), length(c) * (1 + 1e-12)) << m;
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomCurve, ::testing::Range<std::uint64_t>(1, 21));
