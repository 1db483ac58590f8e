#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "inspectra/curve.hpp"
#include "inspectra/error.hpp"
#include "inspectra/random.hpp"

namespace inspectra {

struct OptimizerConfig {
  std::size_t vertex_count = 200;
  /// Fibonacci directions in the initial penalty set.
  int penalty_directions = 2000;
  /// One descent stage per weight; strictly increasing.
  std::vector<double> penalty_weights{10.0, 100.0, 1000.0};
  int max_iters = 4000;  ///< per stage
  double step = 1e-3;
  std::uint64_t seed = kDefaultSeed;
  double tol_feasibility = 1e-6;
  int resample_every = 100;
  /// Directions appended after each stage.
  int refine_directions = 32;
  /// Iterations of the final phase that descends length / exact origin
  /// inradius over the hull facets; 0 skips it.
  int polish_iters = 9000;

  void validate() const;
};

struct TraceRow {
  int iteration = 0;
  int stage = 0;
  double weight = 0.0;
  double length = 0.0;
  double merit = 0.0;
  double worst_slack = 0.0;  ///< over the current penalty directions
  double step = 0.0;
  bool accepted = false;
  bool resampled = false;
};

struct OptimizerTrace {
  std::vector<TraceRow> rows;
  std::vector<Polyline> stage_curves;
  Polyline final_curve{std::vector<Point>{Point::Zero(3), Point::Ones(3)}, false};
  double initial_length = 0.0;
  double final_length = 0.0;
  double final_slack = 0.0;  ///< exact (hull facets) after the final rescale
  double inflation = 1.0;    ///< radial factor applied to an infeasible init
  double final_scale = 1.0;  ///< radial factor applied at the end

  std::string to_csv() const;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::shared_ptr<const OptimizerTrace> trace)
      : Error(what), trace_(std::move(trace)) {}
  const OptimizerTrace& trace() const { return *trace_; }

 private:
  std::shared_ptr<const OptimizerTrace> trace_;
};

/// min over u of (max_i <v_i, u> - 1).
double feasibility_slack(const Polyline& poly, std::span<const Point> directions);

/// Exact min over the sphere of the support function minus 1 for a curve in
/// R^3 (smallest hull facet offset minus 1); -1 for flat curves.
double exact_slack(const Polyline& poly);

/// Penalized gradient descent on L + w sum_u max(0, 1 - h(u))^2 over closed
/// curves in R^3, one stage per weight, with backtracking (halve on
/// rejection, grow by 1.5 on acceptance). The init is resampled to
/// vertex_count points and inflated radially when its hull misses the unit
/// sphere. A final phase descends the scale-free ratio L / r over the exact
/// hull facets (soft minimum of the facet offsets) and keeps the best curve;
/// the result is rescaled radially so its exact origin inradius is 1.
/// Throws DivergenceError when the length exceeds 10x its initial value.
OptimizerTrace shorten(const Polyline& init, const OptimizerConfig& cfg);

struct InteriorRun {
  std::size_t first = 0;  ///< first interior vertex
  std::size_t count = 0;
  std::size_t before = 0;  ///< bracketing boundary vertices
  std::size_t after = 0;
  double residual = 0.0;   ///< max distance to the line through the brackets
  double origin_distance = 0.0;  ///< distance from o to the bracket chord
};

struct ChordReport {
  std::vector<InteriorRun> runs;
  std::size_t interior_vertices = 0;
  double max_residual = 0.0;
};

/// Runs of vertices strictly inside the hull (every facet farther than 1e-6)
/// and their deviation from straight chords. R^3 curves only.
ChordReport chord_structure_diagnostic(const Polyline& poly);

struct BaseballFit {
  double hausdorff = 0.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

/// Hausdorff distance to the best-fit rotated baseball curve (measured, not
/// asserted). The curve's smallest-inertia axis is aligned with the
/// baseball's and the remaining rotation angle is searched.
BaseballFit baseball_distance(const Polyline& poly);

}  // namespace inspectra
