#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "inspectra/error.hpp"
#include "inspectra/generators.hpp"
#include "inspectra/hull.hpp"
#include "inspectra/optimizer.hpp"

using namespace inspectra;

namespace {

constexpr double kPi = std::numbers::pi;

OptimizerConfig quick_config() {
  OptimizerConfig cfg;
  cfg.vertex_count = 60;
  cfg.penalty_directions = 300;
  cfg.max_iters = 300;
  cfg.polish_iters = 600;
  return cfg;
}

}  // namespace

TEST(FeasibilitySlack, FrozenExamples) {
  const auto ico = icosphere(3);
  EXPECT_GE(feasibility_slack(baseball_curve(500), ico), -1e-5);
  const Polyline circle = circle_curve(1.0, 200, 3, false);
  EXPECT_LE(feasibility_slack(circle, ico), -1.0 + 1e-9);
  std::vector<Point> cube;
  for (int i = 0; i < 8; ++i) cube.push_back(Eigen::Vector3d(i & 1 ? 1 : -1, i & 2 ? 1 : -1, i & 4 ? 1 : -1));
  const Polyline cube_tour(cube, true);
  const std::vector<Point> diag{Eigen::Vector3d(1, 1, 1).normalized()};
  EXPECT_NEAR(feasibility_slack(cube_tour, diag), std::sqrt(3.0) - 1.0, 1e-15);
  const std::vector<Point> axes{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(0, 0, 1)};
  EXPECT_NEAR(feasibility_slack(cube_tour, axes), 0.0, 1e-15);
  EXPECT_THROW(feasibility_slack(cube_tour, {}), InvalidArgument);
}

TEST(ExactSlack, FlatCurveIsMinusOne) {
  EXPECT_EQ(exact_slack(circle_curve(3.0, 50)), -1.0);
  EXPECT_NEAR(exact_slack(baseball_curve(500)), 0.999995065185003 - 1.0, 1e-10);
}

TEST(OptimizerConfig, ValidatesSchedule) {
  OptimizerConfig cfg;
  cfg.penalty_weights = {10, 10};
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.penalty_weights = {};
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = OptimizerConfig{};
  cfg.vertex_count = 3;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  EXPECT_NO_THROW(OptimizerConfig{}.validate());
}

TEST(Shorten, RejectsOpenOrPlanarDimension) {
  const Polyline open({Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0)}, false);
  EXPECT_THROW(shorten(open, quick_config()), InvalidArgument);
  const Polyline planar({Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1), Eigen::Vector2d(-1, -1)}, true);
  EXPECT_THROW(shorten(planar, quick_config()), UnsupportedDimension);
}

TEST(Shorten, FeasibleNoShorterThanTheoremAndDeterministic) {
  const Polyline init = noisy_baseball(60, 0.05, 3);
  const OptimizerTrace a = shorten(init, quick_config());
  EXPECT_GE(a.final_slack, -1e-9);
  EXPECT_GE(a.final_length, 4 * kPi - 0.02);
  EXPECT_LT(a.final_length, a.initial_length);
  const OptimizerTrace b = shorten(init, quick_config());
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.final_length, b.final_length);
}

TEST(Shorten, AcceptedStepsNeverRaiseMeritWithinAStage) {
  const OptimizerTrace t = shorten(noisy_baseball(60, 0.05, 4), quick_config());
  double prev = 0.0;
  int stage = -1;
  for (const auto& r : t.rows) {
    if (r.stage != stage || r.resampled) {
      stage = r.stage;
      prev = r.merit;
      continue;
    }
    if (r.accepted) EXPECT_LE(r.merit, prev + 1e-12) << "iteration " << r.iteration;
    prev = r.merit;
  }
}

TEST(Shorten, FlatCircleIsLiftedIntoAFeasibleCurve) {
  const OptimizerTrace t = shorten(circle_curve(3.0, 60), quick_config());
  EXPECT_EQ(t.inflation, 1.0);
  EXPECT_GE(t.final_slack, -1e-9);
  EXPECT_GE(t.final_length, 4 * kPi - 0.02);
}

TEST(TraceCsv, HeaderAndRowCount) {
  const OptimizerTrace t = shorten(noisy_baseball(60, 0.05, 5), quick_config());
  const std::string csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iteration,stage,weight,length,merit,worst_slack,step,accepted,resampled");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), t.rows.size() + 1);
}

TEST(ChordDiagnostic, BaseballHasNoInteriorRuns) {
  const ChordReport r = chord_structure_diagnostic(baseball_curve(100));
  EXPECT_EQ(r.interior_vertices, 0u);
  EXPECT_TRUE(r.runs.empty());
}

TEST(ChordDiagnostic, InteriorZigzagIsReported) {
  // Octahedron tour with a zigzag pushed inside between two corners.
  std::vector<Point> v{Eigen::Vector3d(2, 0, 0), Eigen::Vector3d(1.2, 0.3, 0.1), Eigen::Vector3d(0.8, 0.6, -0.1),
                       Eigen::Vector3d(0, 2, 0), Eigen::Vector3d(0, 0, 2), Eigen::Vector3d(-2, 0, 0),
                       Eigen::Vector3d(0, -2, 0), Eigen::Vector3d(0, 0, -2)};
  const ChordReport r = chord_structure_diagnostic(Polyline(v, true));
  ASSERT_EQ(r.runs.size(), 1u);
  EXPECT_EQ(r.runs[0].count, 2u);
  EXPECT_EQ(r.runs[0].before, 0u);
  EXPECT_EQ(r.runs[0].after, 3u);
  EXPECT_GT(r.max_residual, 0.05);
}

TEST(BaseballFit, RecoversRotatedBaseball) {
  const Polyline b = baseball_curve(100);
  EXPECT_LT(baseball_distance(b).hausdorff, 1e-3);
  std::vector<Point> v;
  for (const auto& p : b.vertices()) v.push_back(Eigen::Vector3d(p[1], p[2], p[0]));
  EXPECT_LT(baseball_distance(Polyline(v, true)).hausdorff, 1e-2);
  EXPECT_GT(baseball_distance(circle_curve(1.5, 200)).hausdorff, 0.3);
}
