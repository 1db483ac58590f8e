#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "inspectra/curve.hpp"

namespace inspectra {

/// Planar unfolding of a curve: |unf| = |gamma|, arclength is preserved, and
/// the polar angle advances by the angular speed of gamma/|gamma|.
struct UnfoldedCurve {
  std::vector<double> radius;       ///< rho_j = |gamma_j|
  std::vector<double> angle;        ///< cumulative theta_j
  std::vector<int> branch;          ///< k_j, starting at 1
  std::vector<Eigen::Vector2d> planar;  ///< rho e^{i(theta + (k-1) pi)}
  /// Source point of each vertex (shifted start; inserted origin feet).
  std::vector<Point> source;
  /// Index into the source polyline, or -1 for inserted passage points.
  std::vector<long> source_index;
  bool source_closed = false;
  std::size_t start_shift = 0;  ///< cyclic shift applied to a closed source

  std::size_t size() const noexcept { return radius.size(); }
  std::size_t segment_count() const noexcept { return radius.empty() ? 0 : radius.size() - 1; }
  /// Open planar polyline through `planar`.
  Polyline planar_polyline() const;
};

/// Unfolds a polyline in R^n (n >= 2). Closed sources are cyclically shifted
/// to the global radius minimum (lowest index among ties within 1e-12) and the
/// start vertex is repeated at the end. Segments passing within tol of o get
/// the passage point inserted; the branch index increments once per passage.
/// Throws InvalidArgument for a segment with both endpoints at o.
UnfoldedCurve unfold(const Polyline& poly, double tol = kGeomTol);

/// Max over segments of |cos(alpha) - drho/ds| for source and unfolded
/// curves, alpha measured between the chord and the chord midpoint, and
/// drho/ds = (rho_{j+1} - rho_j) / chord. Segments whose midpoint is within
/// tol of o are skipped.
double verify_alpha(const Polyline& poly, const UnfoldedCurve& unf, double tol = kGeomTol);

enum class SpiralDirection { forward, reversed };
enum class SpiralStart { origin, orthogonal, corner_support, unsupported };

struct SpiralSegment {
  std::size_t start_index = 0;  ///< vertex index in the refined curve
  std::size_t end_index = 0;    ///< inclusive, start_index < end_index
  SpiralDirection direction = SpiralDirection::forward;
  bool strict = true;
  double start_radius = 0.0;  ///< radius at the spiral's start (its minimum)
  double end_radius = 0.0;
  SpiralStart start_kind = SpiralStart::orthogonal;
  bool certified = true;  ///< local convexity certificate held
  std::string diagnostic;
};

struct EfficiencyTerm {
  std::string piece;  ///< "spiral:<i>" or "residual"
  double length = 0.0;
  double horizon = 0.0;
  double efficiency = 0.0;
  double start_radius = 0.0;
};

struct DecompositionReport {
  /// Unfolded curve with the radius minima on segment interiors inserted as
  /// vertices; indices below refer to it.
  UnfoldedCurve refined;
  std::vector<SpiralSegment> spirals;
  std::vector<std::size_t> residual_segments;
  std::vector<EfficiencyTerm> efficiency_terms;
  double total_length = 0.0;
  double total_horizon = 0.0;  ///< horizon of the unrefined unfolded curve
  double identity_residual = 0.0;
  std::size_t certificate_failures = 0;
};

/// Splits the unfolded curve into maximal runs of strictly increasing radius
/// (forward spirals) and strictly decreasing radius (reversed spirals);
/// segments with |drho| <= tol form the residual. Each run is tested for
/// local convexity with respect to o; failures are recorded, not thrown.
DecompositionReport spiral_decomposition(const UnfoldedCurve& unf, double tol = kGeomTol);

struct PieceCheck {
  std::string piece;
  double efficiency = 0.0;
  bool pass = false;
  bool strict_expected = false;  ///< start radius < 1 - tol
  bool strict_pass = true;       ///< E < 2 when strict_expected
  bool certified = true;         ///< false for uncertified spiral runs
};

/// Per piece: pass = E <= 2 + tol, plus the strict expectation for spirals
/// starting inside the unit disk.
std::vector<PieceCheck> spiral_efficiency_check(const DecompositionReport& report,
                                                double tol = 1e-3);

/// Pairs of non-adjacent segments at most `window` apart that intersect, plus
/// adjacent segments that fold back onto each other.
std::size_t local_self_intersections(const UnfoldedCurve& unf, std::size_t window = 3);

/// {"spirals": [...], "residual_segments": [...], ...}
std::string decomposition_to_json(const DecompositionReport& report);

const char* to_string(SpiralDirection d);
const char* to_string(SpiralStart s);

}  // namespace inspectra
