#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "inspectra/error.hpp"
#include "inspectra/highdim.hpp"

using namespace inspectra;

namespace {

Polyline fourier_curve_r4(int vertices) {
  std::vector<Point> v;
  for (int i = 0; i < vertices; ++i) {
    const double t = 2 * std::numbers::pi * i / vertices;
    Point p(4);
    p << 1 + 0.3 * std::cos(t), std::sin(t), 0.5 * std::cos(2 * t), 0.7 * std::sin(3 * t);
    v.push_back(p);
  }
  return Polyline(std::move(v), true);
}

}  // namespace

TEST(Constants, SlabMeasureAndDerivedC) {
  EXPECT_NEAR(slab_measure_1d(2.0), 0.954500, 1e-6);
  EXPECT_GT(slab_measure_1d(2.0), 0.95);
  EXPECT_GT(slab_measure_1d(2.0), 1 - std::exp(-2.0));
  EXPECT_EQ(slab_measure_1d(0.0), 0.0);
  EXPECT_NEAR(constant_from_slab_measure(0.95), 2 * std::sqrt(std::numbers::e) / (0.95 * 0.95), 1e-15);
  EXPECT_NEAR(constant_from_slab_measure(0.95), 3.653676, 1e-6);
  EXPECT_THROW(slab_measure_1d(-1.0), InvalidArgument);
}

TEST(CrossPolytope, PathShapeAndRatio) {
  const Polyline open = cross_polytope_curve(5, false);
  EXPECT_EQ(open.segment_count(), 9u);
  for (std::size_t i = 0; i < open.segment_count(); ++i) {
    EXPECT_NEAR((open.segment_end(i) - open.segment_start(i)).norm(), std::sqrt(2.0), 1e-15);
  }
  for (int n = 2; n <= 6; ++n) {
    const CrossPolytopeReport r = cross_polytope_report(n, true);
    EXPECT_NEAR(r.inradius, 1 / std::sqrt(double(n)), 1e-10);
    EXPECT_NEAR(r.ratio, 2 * std::sqrt(2.0) * n * std::sqrt(double(n)), 1e-9);
    EXPECT_NEAR(r.discrepancy, std::sqrt(2.0), 1e-10);
  }
  const CrossPolytopeReport r6 = cross_polytope_report(6, false);
  EXPECT_NEAR(r6.ratio / (6 * std::sqrt(6.0)), 2 * std::sqrt(2.0) * 11.0 / 12.0, 1e-9);
  EXPECT_THROW(cross_polytope_curve(1, true), InvalidArgument);
}

TEST(Split, PiecesStartAtOriginAndAvoidMidpoints) {
  const Polyline c = fourier_curve_r4(400);
  const SplitResult r = split_and_project(c);
  ASSERT_EQ(r.family.curves.size() + r.collapsed, 4u);
  EXPECT_TRUE(r.family.base_point_at_origin);
  EXPECT_NO_THROW(r.family.validate());
  EXPECT_TRUE((r.basis.transpose() * r.basis).isIdentity(1e-12));
  for (double s : r.midpoints) {
    EXPECT_LT((r.basis.transpose() * c.point_at(s)).norm(), 1e-10);
  }
  for (const auto& piece : r.family.curves) {
    EXPECT_EQ(piece.dim(), 2);
    EXPECT_EQ(piece.vertex(0).norm(), 0.0);
    // Projection is 1-Lipschitz: each half-interval has length L/(2n).
    EXPECT_LE(length(piece), length(c) / 4 + 1e-12);
  }
  EXPECT_TRUE(r.pieces[0].reversed);
  EXPECT_FALSE(r.pieces[1].reversed);
}

TEST(Split, OddDimensionIsUnsupported) {
  const Polyline c({Point::Zero(3), Point::Ones(3), Point::Unit(3, 0)}, true);
  EXPECT_THROW(split_and_project(c), UnsupportedDimension);
}

TEST(Dyadic, TelescopesToTheCurvePoint) {
  const SplitResult r = split_and_project(fourier_curve_r4(400));
  const Polyline& piece = r.family.curves.front();
  for (double t : {0.0, 0.3, 0.77, 1.0}) {
    const DyadicRow row = dyadic_decomposition(piece, t, 12);
    ASSERT_EQ(row.vectors.size(), 12u);
    EXPECT_LT((row.reconstruction - piece.point_at(row.grid.back() * length(piece))).norm(), 1e-12);
    EXPECT_LT(std::abs(row.grid.back() - t), std::ldexp(1.0, -12) + 1e-15);
    EXPECT_NEAR(row.tail_bound, length(piece) * std::ldexp(1.0, -12), 1e-15);
    // |v_k| <= L 2^-k.
    for (std::size_t k = 0; k < row.vectors.size(); ++k) {
      EXPECT_LE(row.vectors[k].norm(), length(piece) * std::ldexp(1.0, -int(k) - 1) + 1e-12);
    }
  }
  EXPECT_THROW(dyadic_decomposition(piece, 1.5, 4), InvalidArgument);
  EXPECT_THROW(dyadic_decomposition(piece, 0.5, 0), InvalidArgument);
}

TEST(Dyadic, MenuSizesAndMembership) {
  const Polyline seg({Point::Zero(2), Eigen::Vector2d(1, 1)}, false);
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(dyadic_menu(seg, k).size(), std::size_t{1} << (k - 1));
  const DyadicRow row = dyadic_decomposition(seg, 0.4, 6);
  for (int k = 1; k <= 6; ++k) {
    const auto menu = dyadic_menu(seg, k);
    bool found = false;
    for (const auto& v : menu) found = found || (v - row.vectors[k - 1]).norm() < 1e-14;
    EXPECT_TRUE(found) << "level " << k;
  }
}

TEST(Gaussian, McIsDeterministicAndCalibrated) {
  const auto half = [](const Eigen::VectorXd& x) { return x[0] > 0; };
  const GaussianEstimate a = gaussian_measure_mc(half, 3, 100000, 1);
  EXPECT_NEAR(a.mean, 0.5, 4 * a.std_error);
  EXPECT_EQ(gaussian_measure_mc(half, 3, 100000, 1).mean, a.mean);
  EXPECT_THROW(gaussian_measure_mc(half, 3, 10, 1), InvalidArgument);
}

TEST(Sidak, ProductBoundHolds) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const SlabFamily f = random_slab_family(6, 12, s);
    const SidakResult r = sidak_check(f, 100000, s);
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.rhs_product, 0.0);
  }
  // One slab: the product is exact.
  SlabFamily one{2, {Slab{Eigen::Vector2d(3, 4), 5.0}}};
  const SidakResult r = sidak_check(one, 200000, 2);
  EXPECT_NEAR(r.lhs.mean, slab_measure_1d(1.0), 4 * r.lhs.std_error);
  SlabFamily bad{2, {Slab{Eigen::Vector2d(0, 0), 1.0}}};
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(BallBound, FormulaAndPass) {
  const BallBoundResult r = gaussian_ball_bound_check(4, 1.0, 100000, 3);
  EXPECT_NEAR(r.bound, std::pow(std::sqrt(std::numbers::e) / 2.0, 4), 1e-15);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.mc.mean, r.bound);
}

TEST(Direction, MinimaxOnCrossPolytopeSegments) {
  const DirectionCertificate c = find_direction(cross_polytope_segments(3), DirectionMethod::minimax);
  // The best direction sits on a diagonal: max_i sqrt 3 |u_i| = 1.
  EXPECT_NEAR(c.bound, 1.0, 1e-6);
  EXPECT_EQ(c.per_curve_max.size(), 6u);
  const DirectionCertificate again = certify_direction(cross_polytope_segments(3), c.u);
  EXPECT_EQ(again.bound, c.bound);
}

TEST(Direction, SlabRejectionWithGentleWeightsMeetsItsBound) {
  const CurveFamily fam = random_staircase_family(2, 4, std::sqrt(2.0));
  DirectionParams p;
  p.depth = 3;
  p.weights = {3.0, 3.0, 3.0};
  p.budget = 200000;
  const DirectionCertificate c = find_direction(fam, DirectionMethod::slab_rejection, p);
  ASSERT_TRUE(c.theoretical_bound.has_value());
  EXPECT_LE(c.bound, *c.theoretical_bound + 1e-12);
  EXPECT_GT(c.samples_used, 0);
}

TEST(Direction, NarrowSlabsExhaustASmallBudget) {
  const CurveFamily fam = random_staircase_family(4, 1, 2.0);
  DirectionParams p;
  p.depth = 6;
  p.weights.assign(6, 1e-4);
  p.budget = 2000;
  EXPECT_THROW(find_direction(fam, DirectionMethod::slab_rejection, p), BudgetExhausted);
}

TEST(Staircase, LengthAndBasePoint) {
  const CurveFamily f = random_staircase_family(3, 9, std::sqrt(3.0));
  ASSERT_EQ(f.curves.size(), 6u);
  EXPECT_NO_THROW(f.validate());
  for (const auto& c : f.curves) EXPECT_NEAR(length(c), std::sqrt(3.0), 1e-12);
}

TEST(Tikhomirov, CrossPolytopeAndFailingHypothesis) {
  std::vector<Point> pts;
  for (const auto& c : cross_polytope_segments(4).curves) pts.push_back(c.vertex(1));
  const TikhomirovReport r = tikhomirov_check(pts);
  EXPECT_TRUE(r.hypothesis);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.max_norm, 2.0, 1e-15);
  EXPECT_NEAR(r.threshold, 2.0 / kDefaultC, 1e-15);
  // 2n points at distance 1.01 in R^9 cannot surround the sphere.
  std::vector<Point> near;
  for (int i = 0; i < 18; ++i) {
    CounterRng rng(5, i);
    near.push_back(1.01 * rng.unit_vector(9));
  }
  const TikhomirovReport f = tikhomirov_check(near);
  EXPECT_FALSE(f.hypothesis);
  EXPECT_TRUE(f.pass);
}

TEST(DeltaTable, LevelsAndConstant) {
  const DeltaTable t = delta_table(8);
  ASSERT_EQ(t.levels.size(), 8u);
  EXPECT_NEAR(t.levels[0].a, 2.0, 0);
  EXPECT_NEAR(t.levels[2].a, 8.0 / 9.0, 1e-15);
  for (const auto& l : t.levels) {
    EXPECT_GE(l.measure, l.lower_bound);
    EXPECT_EQ(l.multiplicity, std::ldexp(1.0, l.k - 1));
  }
  EXPECT_NEAR(t.constant_exact, 2 * std::sqrt(std::numbers::e) / t.delta_exact, 1e-6 * t.constant_exact);
  // The literal level sequence gives a tiny delta, far from 0.95^2.
  EXPECT_LT(delta_table(40).delta_exact, 1e-6);
}
