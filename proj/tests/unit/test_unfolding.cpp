#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>
#include <nlohmann/json.hpp>

#include "inspectra/error.hpp"
#include "inspectra/generators.hpp"
#include "inspectra/horizon.hpp"
#include "inspectra/unfolding.hpp"
#include "test_curves.hpp"

using namespace inspectra;

namespace {

constexpr double kPi = std::numbers::pi;

Polyline rotate(const Polyline& c, const Eigen::Matrix3d& R) {
  std::vector<Point> v;
  for (const auto& p : c.vertices()) v.push_back(R * Eigen::Vector3d(p));
  return Polyline(std::move(v), c.closed());
}

// Planar open curve whose radius rises from 1 to 2 and falls back to 1.
Polyline rise_and_fall() {
  std::vector<Point> v;
  for (int i = 0; i <= 40; ++i) {
    const double t = i / 40.0;
    const double r = 1.0 + std::sin(kPi * t);
    v.push_back(Eigen::Vector3d(r * std::cos(t), r * std::sin(t), 0));
  }
  return Polyline(std::move(v), false);
}

}  // namespace

TEST(Unfold, CircleKeepsRadiusAndTurnsOnce) {
  const Polyline c = circle_curve(1.5, 200);
  const UnfoldedCurve u = unfold(c);
  ASSERT_EQ(u.size(), 201u);  // start repeated at the end
  for (double r : u.radius) EXPECT_NEAR(r, c.vertex(0).norm(), 1e-12);
  EXPECT_NEAR(u.angle.back(), 2 * kPi, 1e-9);
  EXPECT_NEAR(length(u.planar_polyline()), length(c), 1e-9);
}

TEST(Unfold, PreservesLengthRadiiAndEfficiency) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Polyline c = fixtures::random_fourier_curve(s, 300);
    const UnfoldedCurve u = unfold(c);
    const Polyline planar = u.planar_polyline();
    EXPECT_NEAR(length(planar), length(c), 1e-9);
    for (std::size_t j = 0; j < u.size(); ++j) EXPECT_NEAR(u.planar[j].norm(), u.radius[j], 1e-12);
    EXPECT_NEAR(efficiency(planar).efficiency, efficiency(c).efficiency, 1e-9);
  }
}

TEST(Unfold, StartsAtGlobalRadiusMinimum) {
  const Polyline c = fixtures::random_fourier_curve(3, 200);
  const UnfoldedCurve u = unfold(c);
  for (double r : u.radius) EXPECT_GE(r, u.radius.front() - 1e-12);
}

TEST(Unfold, InvariantUnderRotation) {
  const Polyline c = fixtures::random_fourier_curve(4, 200);
  const Eigen::Matrix3d R = Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();
  const UnfoldedCurve a = unfold(c), b = unfold(rotate(c, R));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j) EXPECT_LT((a.planar[j] - b.planar[j]).norm(), 1e-9);
}

TEST(Unfold, OriginPassageAdvancesBranch) {
  const Polyline line({Eigen::Vector3d(-1, 0.0, 0), Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(1, 1, 0)}, false);
  const UnfoldedCurve u = unfold(line);
  ASSERT_EQ(u.size(), 4u);
  EXPECT_EQ(u.source_index[1], -1);
  EXPECT_NEAR(u.radius[1], 0.0, 1e-15);
  EXPECT_EQ(u.branch.front(), 1);
  EXPECT_EQ(u.branch.back(), 2);
  // The image passes straight through o.
  EXPECT_NEAR(length(u.planar_polyline()), length(line), 1e-12);
  EXPECT_NEAR((u.planar[2] + u.planar[0]).norm(), 0.0, 1e-12);
}

TEST(Unfold, SegmentAtOriginThrows) {
  const Polyline bad({Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0)}, false);
  EXPECT_NO_THROW(unfold(bad));
  const Polyline both({Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0, 1e-13, 0)}, false);
  EXPECT_THROW(unfold(both), InvalidArgument);
}

TEST(VerifyAlpha, SmallAndShrinksWithRefinement) {
  const double coarse = verify_alpha(fixtures::random_fourier_curve(8, 250),
                                     unfold(fixtures::random_fourier_curve(8, 250)));
  const Polyline f = fixtures::random_fourier_curve(8, 1000);
  const double fine = verify_alpha(f, unfold(f));
  EXPECT_LT(coarse, 5e-3);
  EXPECT_LT(fine, coarse);
}

TEST(VerifyAlpha, RejectsForeignUnfolding) {
  const Polyline a = fixtures::random_fourier_curve(1, 100), b = fixtures::random_fourier_curve(2, 100);
  EXPECT_THROW(verify_alpha(a, unfold(b)), InvalidArgument);
}

TEST(Spirals, RiseAndFallSplitsIntoTwoRuns) {
  const DecompositionReport rep = spiral_decomposition(unfold(rise_and_fall()));
  ASSERT_EQ(rep.spirals.size(), 2u);
  EXPECT_EQ(rep.spirals[0].direction, SpiralDirection::forward);
  EXPECT_EQ(rep.spirals[1].direction, SpiralDirection::reversed);
  EXPECT_NEAR(rep.spirals[0].start_radius, 1.0, 1e-12);
  EXPECT_LT(rep.identity_residual, 1e-9);
  EXPECT_NEAR(rep.total_length, length(rise_and_fall()), 1e-12);
}

TEST(Spirals, BaseballPiecesHaveEfficiencyTwo) {
  const DecompositionReport rep = spiral_decomposition(unfold(baseball_curve(100)));
  const auto checks = spiral_efficiency_check(rep);
  ASSERT_FALSE(checks.empty());
  for (const auto& c : checks) {
    EXPECT_TRUE(c.pass) << c.piece;
    EXPECT_NEAR(c.efficiency, 2.0, 1e-3);
  }
  EXPECT_LT(rep.identity_residual, 1e-9);
}

TEST(Spirals, ReportJsonHasContractKeys) {
  const DecompositionReport rep = spiral_decomposition(unfold(rise_and_fall()));
  const auto j = nlohmann::json::parse(decomposition_to_json(rep));
  for (const char* key : {"total_length", "total_horizon", "identity_residual", "spirals"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(decomposition_to_json(rep), decomposition_to_json(spiral_decomposition(unfold(rise_and_fall()))));
}

TEST(Spirals, EnumNames) {
  EXPECT_STREQ(to_string(SpiralDirection::forward), "forward");
  EXPECT_STREQ(to_string(SpiralStart::corner_support), "corner_support");
}

TEST(SelfIntersections, SimpleCircleHasNone) {
  EXPECT_EQ(local_self_intersections(unfold(circle_curve(2.0, 100))), 0u);
}
