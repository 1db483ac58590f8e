#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "inspectra/curve.hpp"
#include "inspectra/error.hpp"
#include "inspectra/random.hpp"

namespace inspectra {

/// Default constant of the direction and point-distance bounds; equals
/// 2 sqrt(e) / delta with delta = 0.95^2.
inline constexpr double kDefaultC = 3.65;

/// 2 sqrt(e) / 0.95^2 = 3.6534...
double constant_from_slab_measure(double slab_measure = 0.95);

/// Closed or open path e1, e2, ..., en, -e1, ..., -en.
Polyline cross_polytope_curve(int n, bool closed);

struct CrossPolytopeReport {
  int n = 0;
  double length = 0.0;
  double inradius = 0.0;        ///< origin-centred, by minimax (exact 1/sqrt(n) expected)
  double ratio = 0.0;           ///< length / inradius
  double expected_ratio = 0.0;  ///< 2 sqrt(2) n sqrt(n) (closed) or sqrt(2)(2n-1) sqrt(n)
  double stated_ratio = 0.0;    ///< 2 n sqrt(n), the constant quoted for this family
  double discrepancy = 0.0;     ///< ratio / stated_ratio
};

CrossPolytopeReport cross_polytope_report(int n, bool closed);

struct SplitPiece {
  double from = 0.0;  ///< preimage arclength range [from, to] on the source
  double to = 0.0;
  bool reversed = false;  ///< traversed from `to` back to `from`
};

struct SplitResult {
  CurveFamily family;
  std::vector<SplitPiece> pieces;  ///< one per family member
  std::size_t collapsed = 0;       ///< pieces whose projection degenerated
  Eigen::MatrixXd basis;           ///< 2n x n orthonormal basis of H
  std::vector<double> cuts;        ///< t_0..t_n (arclength)
  std::vector<double> midpoints;   ///< s_1..s_n
};

/// Splits a curve in R^{2n} at n equidistant arclength intervals, projects
/// onto an n-dimensional subspace H orthogonal to the interval midpoints
/// gamma(s_i), and returns the 2n half-interval pieces, each starting at the
/// projected midpoint (o). Throws UnsupportedDimension for odd dimension.
SplitResult split_and_project(const Polyline& poly);

struct DyadicRow {
  std::vector<double> grid;      ///< t_1..t_K
  std::vector<Point> vectors;    ///< v_1..v_K
  Point reconstruction;          ///< sum of v_k = gamma(t_K)
  double tail_bound = 0.0;       ///< length * 2^-K
};

/// Dyadic telescoping of gamma(t) for a curve starting at o, parameterized
/// by normalized arclength on [0, 1]. Throws InvalidArgument for t outside
/// [0, 1] or depth < 1.
DyadicRow dyadic_decomposition(const Polyline& curve, double t, int depth);

/// All 2^{k-1} possible values of v_k (independent of t).
std::vector<Point> dyadic_menu(const Polyline& curve, int k);

struct GaussianEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo standard Gaussian measure of a set; sample i is
/// CounterRng(seed, i).normal_vector(n). Requires samples >= 100.
GaussianEstimate gaussian_measure_mc(const std::function<bool(const Eigen::VectorXd&)>& member,
                                     int n, std::int64_t samples, std::uint64_t seed);

/// Gaussian measure of [-a, a]: erf(a / sqrt 2).
double slab_measure_1d(double half_width);

struct Slab {
  Point v;
  double half_width = 0.0;
  bool contains(const Eigen::VectorXd& x) const { return std::abs(x.dot(v)) <= half_width; }
  double normalized_half_width() const { return half_width / v.norm(); }
};

struct SlabFamily {
  int dim = 0;
  std::vector<Slab> slabs;
  void validate() const;
  bool contains(const Eigen::VectorXd& x) const;
};

/// Random slabs with normalized half-widths uniform in [lo, hi].
SlabFamily random_slab_family(int n, std::size_t count, std::uint64_t seed, double lo = 0.5,
                              double hi = 2.5);

struct SidakResult {
  GaussianEstimate lhs;
  double rhs_product = 0.0;
  bool pass = false;
};

/// lhs = MC measure of the intersection, rhs = product of the exact 1-D slab
/// measures; pass = lhs >= rhs - 3 stderr.
SidakResult sidak_check(const SlabFamily& family, std::int64_t samples, std::uint64_t seed);

struct BallBoundResult {
  GaussianEstimate mc;
  double bound = 0.0;  ///< (sqrt(e) r / sqrt(n))^n
  bool pass = false;
};

BallBoundResult gaussian_ball_bound_check(int n, double r, std::int64_t samples, std::uint64_t seed);

enum class DirectionMethod { minimax, slab_rejection };

struct DirectionParams {
  // minimax
  int restarts = 64;
  int iters = 300;
  std::uint64_t seed = kDefaultSeed;
  // slab_rejection
  int depth = 6;
  /// Slab half-width for level k is sqrt(n) * weights[k-1]; empty selects
  /// 1/k^2.
  std::vector<double> weights;
  std::int64_t budget = 1000000;
  /// Minimum |u0|; 0 selects sqrt(n/e) P^{1/n}, where P is the product of the
  /// exact slab measures, so the ball bound cannot exceed P.
  double min_norm = 0.0;
};

struct DirectionCertificate {
  Point u;
  std::vector<double> per_curve_max;  ///< exact, over every vertex
  double bound = 0.0;                 ///< max of per_curve_max
  DirectionMethod method = DirectionMethod::minimax;
  /// slab_rejection only: sqrt(n) sum_k c_k / |u0| + L 2^-K.
  std::optional<double> theoretical_bound;
  std::int64_t samples_used = 0;
};

class BudgetExhausted : public Error {
 public:
  BudgetExhausted(std::int64_t attempts, std::int64_t in_slabs, double min_norm)
      : Error("slab rejection exhausted its budget: " + std::to_string(attempts) +
              " samples, " + std::to_string(in_slabs) + " inside all slabs, none with |u0| >= " +
              std::to_string(min_norm)),
        attempts_(attempts),
        in_slabs_(in_slabs) {}
  std::int64_t attempts() const noexcept { return attempts_; }
  std::int64_t in_slabs() const noexcept { return in_slabs_; }

 private:
  std::int64_t attempts_;
  std::int64_t in_slabs_;
};

/// Exact certificate at u: per-curve max of <v, u> over all vertices.
DirectionCertificate certify_direction(const CurveFamily& family, const Point& u);

DirectionCertificate find_direction(const CurveFamily& family, DirectionMethod method,
                                    const DirectionParams& params = {});

/// 2n curves from o in R^n, each a monotone axis-parallel staircase of the
/// given length.
CurveFamily random_staircase_family(int n, std::uint64_t seed, double curve_length,
                                    int steps = 8);

/// 2n segments from o to sqrt(n) (+-e_i).
CurveFamily cross_polytope_segments(int n);

struct TikhomirovReport {
  int n = 0;
  std::size_t points = 0;
  bool hypothesis = false;     ///< hull contains S^{n-1}
  double min_slack = 0.0;      ///< min over tested u of h(u) - 1
  double max_norm = 0.0;       ///< max |P_i|
  double threshold = 0.0;      ///< sqrt(n) / C
  double cos_rho = 0.0;        ///< 1 / max |P_i|, the covering cap radius
  double cos_rho_bound = 0.0;  ///< C / sqrt(n)
  bool applicable = true;      ///< at most 2n points
  bool pass = false;           ///< hypothesis implies max_norm >= threshold
};

TikhomirovReport tikhomirov_check(const std::vector<Point>& points, double C = kDefaultC,
                                  int directions = 4000);

struct SlabLevel {
  int k = 0;
  double a = 0.0;            ///< 2^k / k^2
  double measure = 0.0;      ///< erf(a / sqrt 2)
  double lower_bound = 0.0;  ///< 1 - e^{-a^2/2}
  double multiplicity = 0;   ///< 2^{k-1}
};

struct DeltaTable {
  std::vector<SlabLevel> levels;
  double sqrt_delta_exact = 0.0;  ///< prod measure^{2^{k-1}}
  double sqrt_delta_bound = 0.0;  ///< exp(-sum 2^k e^{-a_k^2/2})
  double delta_exact = 0.0;
  double constant_exact = 0.0;    ///< 2 sqrt(e) / delta_exact
};

/// Levels k = 1..depth of the slab product behind the appendix constant.
DeltaTable delta_table(int depth = 40);

}  // namespace inspectra
