#include "inspectra/highdim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "inspectra/hull.hpp"
#include "inspectra/parallel.hpp"

namespace inspectra {

namespace {

const double kSqrtE = std::sqrt(std::numbers::e);

std::vector<Point> all_vertices(const CurveFamily& family) {
  std::vector<Point> pts;
  for (const auto& c : family.curves) {
    pts.insert(pts.end(), c.vertices().begin(), c.vertices().end());
  }
  return pts;
}

// Vertices of the sub-chain between arclengths a < b.
std::vector<Point> subchain(const Polyline& poly, const std::vector<double>& cum, double a, double b) {
  std::vector<Point> out{poly.point_at(a, cum)};
  for (std::size_t j = 0; j < poly.size(); ++j) {
    if (cum[j] > a && cum[j] < b) out.push_back(poly.vertex(j));
  }
  out.push_back(poly.point_at(b, cum));
  return out;
}

}  // namespace

double constant_from_slab_measure(double slab_measure) {
  if (!(slab_measure > 0.0 && slab_measure <= 1.0)) {
    throw InvalidArgument("slab measure must lie in (0, 1]");
  }
  return 2.0 * kSqrtE / (slab_measure * slab_measure);
}

Polyline cross_polytope_curve(int n, bool closed) {
  if (n < 2) throw InvalidArgument("cross polytope curve needs n >= 2");
  std::vector<Point> v;
  for (int sign : {1, -1}) {
    for (int i = 0; i < n; ++i) {
      Point p = Point::Zero(n);
      p[i] = sign;
      v.push_back(std::move(p));
    }
  }
  return Polyline(std::move(v), closed);
}

CrossPolytopeReport cross_polytope_report(int n, bool closed) {
  const Polyline c = cross_polytope_curve(n, closed);
  CrossPolytopeReport r;
  r.n = n;
  r.length = length(c);
  r.inradius = origin_inradius_minimax(c.vertices()).radius;
  r.ratio = r.length / r.inradius;
  const double nn = static_cast<double>(n);
  r.expected_ratio = std::sqrt(2.0) * (closed ? 2.0 * nn : 2.0 * nn - 1.0) * std::sqrt(nn);
  r.stated_ratio = 2.0 * nn * std::sqrt(nn);
  r.discrepancy = r.ratio / r.stated_ratio;
  return r;
}

SplitResult split_and_project(const Polyline& poly) {
  const int dim = poly.dim();
  if (dim % 2 != 0) throw UnsupportedDimension(dim);
  const int n = dim / 2;
  const std::vector<double> cum = poly.arclengths();
  const double total = cum.back();

  SplitResult out;
  for (int i = 0; i <= n; ++i) out.cuts.push_back(total * i / n);
  for (int i = 1; i <= n; ++i) out.midpoints.push_back(0.5 * (out.cuts[i - 1] + out.cuts[i]));

  // Orthonormal basis of span{gamma(s_i)}, then its complement from the
  // standard basis (modified Gram-Schmidt, deterministic order).
  double scale = 0.0;
  for (const auto& v : poly.vertices()) scale = std::max(scale, v.norm());
  scale = std::max(scale, 1.0);
  std::vector<Eigen::VectorXd> span;
  for (double s : out.midpoints) {
    Eigen::VectorXd g = poly.point_at(s, cum);
    for (const auto& q : span) g -= q.dot(g) * q;
    for (const auto& q : span) g -= q.dot(g) * q;
    if (g.norm() > 1e-10 * scale) span.push_back(g.normalized());
  }
  std::vector<Eigen::VectorXd> comp;
  for (int j = 0; j < dim && static_cast<int>(comp.size()) < n; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(dim, j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : span) e -= q.dot(e) * q;
      for (const auto& q : comp) e -= q.dot(e) * q;
    }
    if (e.norm() > 1e-8) comp.push_back(e.normalized());
  }
  out.basis.resize(dim, n);
  for (int j = 0; j < n; ++j) out.basis.col(j) = comp[static_cast<std::size_t>(j)];

  auto project = [&](const std::vector<Point>& pts) {
    std::vector<Point> proj;
    for (const auto& p : pts) {
      Point y = out.basis.transpose() * p;
      if (!proj.empty() && (y - proj.back()).norm() <= 1e-13 * scale) continue;
      proj.push_back(std::move(y));
    }
    return proj;
  };
  out.family.base_point_at_origin = true;
  for (int i = 1; i <= n; ++i) {
    const double a = out.cuts[i - 1], s = out.midpoints[i - 1], b = out.cuts[i];
    for (int half = 0; half < 2; ++half) {
      std::vector<Point> pts = half == 0 ? subchain(poly, cum, a, s) : subchain(poly, cum, s, b);
      if (half == 0) std::reverse(pts.begin(), pts.end());
      std::vector<Point> proj = project(pts);
      if (proj.size() < 2) {
        ++out.collapsed;
        continue;
      }
      proj.front().setZero();  // projection of gamma(s_i), zero up to rounding
      if (proj[1].norm() == 0.0) proj.erase(proj.begin() + 1);
      if (proj.size() < 2) {
        ++out.collapsed;
        continue;
      }
      out.family.curves.emplace_back(std::move(proj), false);
      out.pieces.push_back(half == 0 ? SplitPiece{a, s, true} : SplitPiece{s, b, false});
    }
  }
  return out;
}

namespace {

Point at_fraction(const Polyline& curve, const std::vector<double>& cum, double tau) {
  return curve.point_at(tau * cum.back(), cum);
}

}  // namespace

DyadicRow dyadic_decomposition(const Polyline& curve, double t, int depth) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("dyadic_decomposition needs t in [0, 1]");
  if (depth < 1) throw InvalidArgument("dyadic_decomposition needs depth >= 1");
  if (curve.vertex(0).norm() > 1e-12) throw InvalidArgument("dyadic curve must start at o");
  const std::vector<double> cum = curve.arclengths();
  DyadicRow row;
  row.reconstruction = Point::Zero(curve.dim());
  double prev = 0.0;
  Point prev_point = at_fraction(curve, cum, 0.0);
  for (int k = 1; k <= depth; ++k) {
    const double step = std::ldexp(1.0, -k);
    const double tk = t < prev ? prev - step : prev + step;
    const Point pk = at_fraction(curve, cum, tk);
    row.grid.push_back(tk);
    row.vectors.push_back(pk - prev_point);
    row.reconstruction += row.vectors.back();
    prev = tk;
    prev_point = pk;
  }
  row.tail_bound = cum.back() * std::ldexp(1.0, -depth);
  return row;
}

std::vector<Point> dyadic_menu(const Polyline& curve, int k) {
  if (k < 1 || k > 24) throw InvalidArgument("dyadic_menu needs 1 <= k <= 24");
  const std::vector<double> cum = curve.arclengths();
  std::vector<Point> out;
  if (k == 1) {
    out.push_back(at_fraction(curve, cum, 0.5) - at_fraction(curve, cum, 0.0));
    return out;
  }
  const long count = 1L << (k - 2);
  const double step = std::ldexp(1.0, -k);
  for (long j = 1; j <= count; ++j) {
    const double p = static_cast<double>(2 * j - 1) * std::ldexp(1.0, -(k - 1));
    const Point base = at_fraction(curve, cum, p);
    out.push_back(at_fraction(curve, cum, p - step) - base);
    out.push_back(at_fraction(curve, cum, p + step) - base);
  }
  return out;
}

GaussianEstimate gaussian_measure_mc(const std::function<bool(const Eigen::VectorXd&)>& member,
                                     int n, std::int64_t samples, std::uint64_t seed) {
  if (samples < 100) throw InvalidArgument("gaussian_measure_mc needs samples >= 100");
  if (n < 1) throw InvalidArgument("gaussian_measure_mc needs n >= 1");
  const auto total = static_cast<std::size_t>(samples);
  constexpr std::size_t kBlock = 1 << 14;
  const std::size_t blocks = (total + kBlock - 1) / kBlock;
  std::vector<std::int64_t> hits(blocks, 0);
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t blk = begin; blk < end; ++blk) {
      const std::size_t lo = blk * kBlock, hi = std::min(total, lo + kBlock);
      std::int64_t h = 0;
      for (std::size_t i = lo; i < hi; ++i) {
        CounterRng rng(seed, i);
        if (member(rng.normal_vector(n))) ++h;
      }
      hits[blk] = h;
    }
  });
  std::int64_t h = 0;
  for (auto x : hits) h += x;
  GaussianEstimate e;
  e.samples = samples;
  e.seed = seed;
  e.mean = static_cast<double>(h) / static_cast<double>(samples);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(samples));
  return e;
}

double slab_measure_1d(double half_width) {
  if (!(half_width >= 0.0)) throw InvalidArgument("slab half-width must be >= 0");
  return std::erf(half_width / std::numbers::sqrt2);
}

void SlabFamily::validate() const {
  if (dim < 1) throw InvalidArgument("slab family needs dim >= 1");
  for (const auto& s : slabs) {
    if (s.v.size() != dim) throw InvalidArgument("slab normal has the wrong dimension");
    if (!(s.v.norm() > 0.0)) throw InvalidArgument("slab normal must be nonzero");
    if (!(s.half_width > 0.0)) throw InvalidArgument("slab half-width must be positive");
  }
}

bool SlabFamily::contains(const Eigen::VectorXd& x) const {
  for (const auto& s : slabs) {
    if (!s.contains(x)) return false;
  }
  return true;
}

SlabFamily random_slab_family(int n, std::size_t count, std::uint64_t seed, double lo, double hi) {
  SlabFamily f;
  f.dim = n;
  for (std::size_t i = 0; i < count; ++i) {
    CounterRng rng(seed, i);
    Point v = rng.normal_vector(n);
    while (v.norm() == 0.0) v = rng.normal_vector(n);
    const double a = rng.uniform(lo, hi);
    f.slabs.push_back(Slab{v, a * v.norm()});
  }
  return f;
}

SidakResult sidak_check(const SlabFamily& family, std::int64_t samples, std::uint64_t seed) {
  family.validate();
  SidakResult r;
  r.lhs = gaussian_measure_mc([&](const Eigen::VectorXd& x) { return family.contains(x); },
                              family.dim, samples, seed);
  r.rhs_product = 1.0;
  for (const auto& s : family.slabs) r.rhs_product *= slab_measure_1d(s.normalized_half_width());
  r.pass = r.lhs.mean >= r.rhs_product - 3.0 * r.lhs.std_error;
  return r;
}

BallBoundResult gaussian_ball_bound_check(int n, double r, std::int64_t samples, std::uint64_t seed) {
  if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
  BallBoundResult out;
  const double r2 = r * r;
  out.mc = gaussian_measure_mc([r2](const Eigen::VectorXd& x) { return x.squaredNorm() <= r2; }, n,
                               samples, seed);
  out.bound = std::pow(kSqrtE * r / std::sqrt(static_cast<double>(n)), n);
  out.pass = out.mc.mean <= out.bound + 3.0 * out.mc.std_error;
  return out;
}

DirectionCertificate certify_direction(const CurveFamily& family, const Point& u) {
  DirectionCertificate c;
  c.u = u;
  c.bound = -std::numeric_limits<double>::infinity();
  for (const auto& curve : family.curves) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& v : curve.vertices()) m = std::max(m, v.dot(u));
    c.per_curve_max.push_back(m);
    c.bound = std::max(c.bound, m);
  }
  return c;
}

DirectionCertificate find_direction(const CurveFamily& family, DirectionMethod method,
                                    const DirectionParams& params) {
  family.validate();
  if (family.curves.empty()) throw InvalidArgument("find_direction needs curves");
  if (!family.base_point_at_origin) throw InvalidArgument("find_direction needs curves from o");
  const int n = family.dim();

  if (method == DirectionMethod::minimax) {
    const std::vector<Point> pts = all_vertices(family);
    MinimaxOptions opts;
    opts.restarts = params.restarts;
    opts.iters = params.iters;
    opts.seed = params.seed;
    const SupportMinimum m = minimize_support(pts, opts);
    DirectionCertificate c = certify_direction(family, m.direction);
    c.method = DirectionMethod::minimax;
    return c;
  }

  if (params.depth < 1 || params.depth > 16) throw InvalidArgument("slab depth must be in [1, 16]");
  std::vector<double> weights = params.weights;
  if (weights.empty()) {
    for (int k = 1; k <= params.depth; ++k) weights.push_back(1.0 / (static_cast<double>(k) * k));
  }
  if (static_cast<int>(weights.size()) < params.depth) {
    throw InvalidArgument("slab weights shorter than depth");
  }
  const double rn = std::sqrt(static_cast<double>(n));
  SlabFamily slabs;
  slabs.dim = n;
  double log_product = 0.0;
  double max_length = 0.0;
  for (const auto& curve : family.curves) {
    max_length = std::max(max_length, length(curve));
    for (int k = 1; k <= params.depth; ++k) {
      const double w = rn * weights[static_cast<std::size_t>(k - 1)];
      for (auto& v : dyadic_menu(curve, k)) {
        const double norm = v.norm();
        if (norm == 0.0) continue;
        log_product += std::log(slab_measure_1d(w / norm));
        slabs.slabs.push_back(Slab{std::move(v), w});
      }
    }
  }
  const double min_norm = params.min_norm > 0.0
                              ? params.min_norm
                              : std::sqrt(n / std::numbers::e) * std::exp(log_product / n);
  std::int64_t in_slabs = 0;
  for (std::int64_t i = 0; i < params.budget; ++i) {
    CounterRng rng(params.seed, static_cast<std::uint64_t>(i));
    const Eigen::VectorXd x = rng.normal_vector(n);
    if (!slabs.contains(x)) continue;
    ++in_slabs;
    const double norm = x.norm();
    if (norm < min_norm) continue;
    DirectionCertificate c = certify_direction(family, x / norm);
    c.method = DirectionMethod::slab_rejection;
    double sum = 0.0;
    for (int k = 0; k < params.depth; ++k) sum += weights[static_cast<std::size_t>(k)];
    c.theoretical_bound = rn * sum / norm + max_length * std::ldexp(1.0, -params.depth);
    c.samples_used = i + 1;
    return c;
  }
  throw BudgetExhausted(params.budget, in_slabs, min_norm);
}

CurveFamily random_staircase_family(int n, std::uint64_t seed, double curve_length, int steps) {
  if (n < 1 || steps < 1) throw InvalidArgument("staircase family needs n >= 1 and steps >= 1");
  if (!(curve_length > 0.0)) throw InvalidArgument("staircase length must be positive");
  CurveFamily f;
  f.base_point_at_origin = true;
  for (int i = 0; i < 2 * n; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    std::vector<double> sign(static_cast<std::size_t>(n));
    for (auto& s : sign) s = rng.uniform() < 0.5 ? -1.0 : 1.0;
    std::vector<double> len(static_cast<std::size_t>(steps));
    double sum = 0.0;
    for (auto& l : len) sum += (l = rng.uniform(0.2, 1.0));
    std::vector<Point> v{Point::Zero(n)};
    for (int s = 0; s < steps; ++s) {
      const int axis = std::min(n - 1, static_cast<int>(rng.uniform() * n));
      Point next = v.back();
      next[axis] += sign[static_cast<std::size_t>(axis)] * curve_length * len[static_cast<std::size_t>(s)] / sum;
      v.push_back(std::move(next));
    }
    f.curves.emplace_back(std::move(v), false);
  }
  return f;
}

CurveFamily cross_polytope_segments(int n) {
  if (n < 1) throw InvalidArgument("cross polytope segments need n >= 1");
  CurveFamily f;
  f.base_point_at_origin = true;
  const double s = std::sqrt(static_cast<double>(n));
  for (int sign : {1, -1}) {
    for (int i = 0; i < n; ++i) {
      Point p = Point::Zero(n);
      p[i] = sign * s;
      f.curves.emplace_back(std::vector<Point>{Point::Zero(n), p}, false);
    }
  }
  return f;
}

TikhomirovReport tikhomirov_check(const std::vector<Point>& points, double C, int directions) {
  if (points.empty()) throw InvalidArgument("tikhomirov_check needs points");
  if (!(C > 0.0)) throw InvalidArgument("tikhomirov_check needs C > 0");
  TikhomirovReport r;
  r.n = static_cast<int>(points.front().size());
  r.points = points.size();
  r.applicable = r.points <= static_cast<std::size_t>(2 * r.n);
  if (r.n == 1) {
    double hi = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
    for (const auto& p : points) hi = std::max(hi, p[0]), lo = std::min(lo, p[0]);
    r.min_slack = std::min(hi, -lo) - 1.0;
  } else {
    const SphereContainment c = contains_unit_sphere(points, directions);
    const SupportMinimum m = minimize_support(points);
    r.min_slack = std::min(c.min_slack, m.value - 1.0);
  }
  r.hypothesis = r.min_slack >= -kContainmentTol;
  for (const auto& p : points) r.max_norm = std::max(r.max_norm, p.norm());
  const double rn = std::sqrt(static_cast<double>(r.n));
  r.threshold = rn / C;
  r.cos_rho = r.max_norm > 0.0 ? 1.0 / r.max_norm : std::numeric_limits<double>::infinity();
  r.cos_rho_bound = C / rn;
  r.pass = !r.hypothesis || r.max_norm >= r.threshold;
  return r;
}

DeltaTable delta_table(int depth) {
  if (depth < 1 || depth > 60) throw InvalidArgument("delta_table depth must be in [1, 60]");
  DeltaTable t;
  double log_exact = 0.0, bound_sum = 0.0;
  for (int k = 1; k <= depth; ++k) {
    SlabLevel l;
    l.k = k;
    l.a = std::ldexp(1.0, k) / (static_cast<double>(k) * k);
    l.measure = slab_measure_1d(l.a);
    l.lower_bound = -std::expm1(-0.5 * l.a * l.a);
    l.multiplicity = std::ldexp(1.0, k - 1);
    log_exact += l.multiplicity * std::log1p(-std::erfc(l.a / std::numbers::sqrt2));
    bound_sum += std::ldexp(1.0, k) * std::exp(-0.5 * l.a * l.a);
    t.levels.push_back(l);
  }
  t.sqrt_delta_exact = std::exp(log_exact);
  t.sqrt_delta_bound = std::exp(-bound_sum);
  t.delta_exact = t.sqrt_delta_exact * t.sqrt_delta_exact;
  t.constant_exact = 2.0 * kSqrtE / t.delta_exact;
  return t;
}

}  // namespace inspectra
