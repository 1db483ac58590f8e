#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace inspectra {

using Point = Eigen::VectorXd;

/// Default absolute tolerance for geometric coincidence tests.
inline constexpr double kGeomTol = 1e-9;

/// A vertex chain in R^dim, optionally closed by an implicit segment from the
/// last vertex back to the first. Parameterization is by arclength and is
/// implicit: a location is a segment index plus a fraction.
class Polyline {
 public:
  /// Validates the invariants (finite coordinates, matching dimension, no
  /// zero-length segments) and throws InvalidArgument on violation.
  Polyline(std::vector<Point> vertices, bool closed);

  int dim() const noexcept { return static_cast<int>(vertices_.front().size()); }
  bool closed() const noexcept { return closed_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t segment_count() const noexcept {
    return closed_ ? vertices_.size() : vertices_.size() - 1;
  }
  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const Point& vertex(std::size_t i) const { return vertices_[i]; }

  /// Endpoints of segment i (the closing segment is the last one).
  const Point& segment_start(std::size_t i) const { return vertices_[i]; }
  const Point& segment_end(std::size_t i) const {
    return vertices_[(i + 1) % vertices_.size()];
  }

  /// Cumulative arclength at each vertex, plus the total at the end (size
  /// segment_count() + 1).
  std::vector<double> arclengths() const;

  /// Point at arclength s in [0, length()], using the cumulative table.
  Point point_at(double s, std::span<const double> cumulative) const;
  Point point_at(double s) const { return point_at(s, arclengths()); }

  Polyline reversed() const;
  /// Cyclic shift so that vertex `start` becomes vertex 0 (closed curves only).
  Polyline rotated(std::size_t start) const;

 private:
  std::vector<Point> vertices_;
  bool closed_;
};

/// Curves sharing one dimension; when base_point_at_origin is set every curve
/// starts at o.
struct CurveFamily {
  std::vector<Polyline> curves;
  bool base_point_at_origin = false;

  /// Throws InvalidArgument if dimensions differ or the base-point invariant
  /// fails (tolerance 1e-12).
  void validate() const;
  int dim() const { return curves.empty() ? 0 : curves.front().dim(); }
};

double length(const Polyline& poly);

/// m vertices on the input chain with all consecutive chords equal (the
/// closing chord included for closed curves); the first vertex is kept.
/// Requires m >= 2 (open) or m >= 3 (closed).
Polyline resample_constant_speed(const Polyline& poly, std::size_t m);

/// Arclength parameters where the chain comes within tol of o at a local
/// minimum of the distance, sorted and deduplicated.
std::vector<double> origin_passages(const Polyline& poly, double tol = kGeomTol);

/// Closest point on segment [a, b] to o, as a fraction in [0, 1].
double closest_fraction_to_origin(const Point& a, const Point& b);

// --- I/O -------------------------------------------------------------------

/// {"dim": n, "closed": bool, "vertices": [[...], ...]} with 17 significant
/// digits per number.
std::string to_json(const Polyline& poly);
Polyline polyline_from_json(const std::string& text);

/// Header row "x1,...,xn" then one vertex per row.
std::string to_csv(const Polyline& poly);
Polyline polyline_from_csv(const std::string& text, bool closed);

Polyline read_polyline(const std::string& path, bool closed_hint_for_csv = true);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_number(double x);

}  // namespace inspectra
