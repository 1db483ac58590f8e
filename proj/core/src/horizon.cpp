#include "inspectra/horizon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Geometry>
#include "inspectra/error.hpp"
#include "inspectra/parallel.hpp"
#include "inspectra/random.hpp"

namespace inspectra {

namespace {

constexpr double kPi = std::numbers::pi;

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

GaussRule make_gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -z;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

template <class F>
double gauss_panel(const GaussRule& rule, const F& f, double a, double b) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return s * half;
}

template <class F>
double adaptive(const GaussRule& rule, const F& f, double a, double b, double whole, double tol,
                int depth) {
  const double m = 0.5 * (a + b);
  const double left = gauss_panel(rule, f, a, m);
  const double right = gauss_panel(rule, f, m, b);
  if (depth >= 40 || std::abs(left + right - whole) <= tol) return left + right;
  return adaptive(rule, f, a, m, left, 0.5 * tol, depth + 1) +
         adaptive(rule, f, m, b, right, 0.5 * tol, depth + 1);
}

// Integral of g over [lo, hi] after the smoothstep change of variables, which
// flattens square-root behaviour at both ends of the interval.
template <class G>
double integrate_smoothed(const GaussRule& rule, const G& g, double lo, double hi, double tol) {
  const double w = hi - lo;
  auto f = [&](double s) {
    const double phi = lo + w * s * s * (3.0 - 2.0 * s);
    return g(phi) * 6.0 * w * s * (1.0 - s);
  };
  return adaptive(rule, f, 0.0, 1.0, gauss_panel(rule, f, 0.0, 1.0), tol, 0);
}

}  // namespace

Eigen::Vector3d lift3(const Point& p) {
  if (p.size() == 3) return {p[0], p[1], p[2]};
  if (p.size() == 2) return {p[0], p[1], 0.0};
  throw UnsupportedDimension(static_cast<int>(p.size()));
}

double cap_area(const Eigen::Vector3d& a) {
  const double r = a.norm();
  return r <= 1.0 ? 0.0 : 2.0 * kPi * (1.0 - 1.0 / r);
}

double cap_intersection_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b, int quad_points) {
  if (quad_points < 16) throw InvalidArgument("cap_intersection_area needs quad_points >= 16");
  const double ra = a.norm(), rb = b.norm();
  if (ra <= 1.0 || rb <= 1.0) return 0.0;
  const double alpha = std::acos(1.0 / ra);
  const double beta = std::acos(1.0 / rb);
  const double omega = std::atan2(a.cross(b).norm(), a.dot(b));
  if (omega >= alpha + beta) return 0.0;
  if (omega + alpha <= beta) return cap_area(a);
  if (omega + beta <= alpha) return cap_area(b);

  const double cb = 1.0 / rb;  // cos(beta)
  const double cw = std::cos(omega), sw = std::sin(omega);
  // Points at polar angle phi from A's axis lie in cap(B) on an azimuthal arc
  // of length 2 acos(q) (whole circle when q <= -1, none when q >= 1).
  auto ring = [&](double phi) {
    const double sp = std::sin(phi);
    const double denom = sp * sw;
    double arc;
    if (denom <= 0.0) {
      arc = std::cos(phi) * cw >= cb ? 2.0 * kPi : 0.0;
    } else {
      const double q = (cb - std::cos(phi) * cw) / denom;
      arc = q <= -1.0 ? 2.0 * kPi : (q >= 1.0 ? 0.0 : 2.0 * std::acos(q));
    }
    return sp * arc;
  };

  std::vector<double> cuts{0.0, alpha};
  for (double x : {std::abs(omega - beta), omega + beta}) {
    if (x > 0.0 && x < alpha) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  const GaussRule& rule = gauss_legendre(quad_points);
  constexpr double kTol = 1e-14;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) total += integrate_smoothed(rule, ring, cuts[i], cuts[i + 1], kTol);
  }
  return std::clamp(total, 0.0, std::min(cap_area(a), cap_area(b)));
}

double segment_horizon(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double ca = cap_area(a), cb = cap_area(b);
  if (ca == 0.0) return cb;
  if (cb == 0.0) return ca;
  const double sym = ca + cb - 2.0 * cap_intersection_area(a, b);
  return std::clamp(sym, std::abs(ca - cb), ca + cb);
}

HorizonReport horizon(const Polyline& poly) {
  if (poly.dim() != 2 && poly.dim() != 3) throw UnsupportedDimension(poly.dim());
  HorizonReport r;
  r.method = HorizonMethod::exact;
  const std::size_t segs = poly.segment_count();
  r.per_segment.assign(segs, 0.0);
  parallel_for(segs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      r.per_segment[i] = segment_horizon(lift3(poly.segment_start(i)), lift3(poly.segment_end(i)));
    }
  });
  for (double h : r.per_segment) r.total += h;
  return r;
}

namespace {

// Signs of <v_j, p> - 1 with zeros replaced by the next nonzero sign.
void resolved_signs(const Eigen::Matrix3Xd& pts, const Eigen::Vector3d& p, bool closed,
                    std::vector<signed char>& s) {
  const Eigen::Index n = pts.cols();
  s.resize(static_cast<std::size_t>(n));
  bool any = false;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double g = pts.col(j).dot(p) - 1.0;
    s[static_cast<std::size_t>(j)] = static_cast<signed char>(g > 0.0 ? 1 : (g < 0.0 ? -1 : 0));
    any = any || g != 0.0;
  }
  if (!any) return;
  // Sweep backwards (twice around for closed chains) carrying the next sign.
  signed char next = 0;
  const Eigen::Index sweeps = closed ? 2 * n : n;
  for (Eigen::Index k = sweeps - 1; k >= 0; --k) {
    auto& v = s[static_cast<std::size_t>(k % n)];
    if (v != 0) {
      next = v;
    } else if (next != 0) {
      v = next;
    }
  }
  if (!closed) {
    // Trailing zeros of an open chain take the previous sign.
    signed char prev = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      auto& v = s[static_cast<std::size_t>(j)];
      if (v != 0) {
        prev = v;
      } else {
        v = prev;
      }
    }
  }
}

Eigen::Matrix3Xd lifted_vertices(const Polyline& poly) {
  Eigen::Matrix3Xd pts(3, static_cast<Eigen::Index>(poly.size()));
  for (std::size_t j = 0; j < poly.size(); ++j) pts.col(static_cast<Eigen::Index>(j)) = lift3(poly.vertex(j));
  return pts;
}

}  // namespace

int crossing_count(const Polyline& poly, const Eigen::Vector3d& p) {
  const Eigen::Matrix3Xd pts = lifted_vertices(poly);
  std::vector<signed char> s;
  resolved_signs(pts, p, poly.closed(), s);
  int count = 0;
  for (std::size_t i = 0; i < poly.segment_count(); ++i) {
    if (s[i] != s[(i + 1) % s.size()]) ++count;
  }
  return count;
}

HorizonReport horizon_mc(const Polyline& poly, std::int64_t samples, std::uint64_t seed) {
  if (poly.dim() != 2 && poly.dim() != 3) throw UnsupportedDimension(poly.dim());
  if (samples < 1) throw InvalidArgument("horizon_mc needs samples >= 1");
  const Eigen::Matrix3Xd pts = lifted_vertices(poly);
  const std::size_t segs = poly.segment_count();
  const auto total = static_cast<std::size_t>(samples);
  constexpr std::size_t kBlock = 1 << 14;
  const std::size_t blocks = (total + kBlock - 1) / kBlock;
  // Integer partial sums per block keep the reduction order-independent.
  std::vector<std::int64_t> sum(blocks, 0), sum_sq(blocks, 0);
  std::vector<std::vector<std::int64_t>> seg_counts(blocks);
  parallel_for(blocks, [&](std::size_t begin, std::size_t end) {
    std::vector<signed char> s;
    for (std::size_t blk = begin; blk < end; ++blk) {
      auto& segc = seg_counts[blk];
      segc.assign(segs, 0);
      const std::size_t lo = blk * kBlock, hi = std::min(total, lo + kBlock);
      for (std::size_t i = lo; i < hi; ++i) {
        CounterRng rng(seed, i);
        const Point u = rng.unit_vector(3);
        resolved_signs(pts, Eigen::Vector3d(u[0], u[1], u[2]), poly.closed(), s);
        std::int64_t c = 0;
        for (std::size_t k = 0; k < segs; ++k) {
          if (s[k] != s[(k + 1) % s.size()]) {
            ++c;
            ++segc[k];
          }
        }
        sum[blk] += c;
        sum_sq[blk] += c * c;
      }
    }
  });
  std::int64_t s1 = 0, s2 = 0;
  std::vector<std::int64_t> per(segs, 0);
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    s1 += sum[blk];
    s2 += sum_sq[blk];
    for (std::size_t k = 0; k < segs; ++k) per[k] += seg_counts[blk][k];
  }
  const double n = static_cast<double>(samples);
  const double mean = static_cast<double>(s1) / n;
  const double var = n > 1 ? std::max(0.0, (static_cast<double>(s2) - n * mean * mean) / (n - 1.0)) : 0.0;
  HorizonReport r;
  r.method = HorizonMethod::monte_carlo;
  r.total = 4.0 * kPi * mean;
  r.mc_stderr = 4.0 * kPi * std::sqrt(var / n);
  r.per_segment.resize(segs);
  for (std::size_t k = 0; k < segs; ++k) r.per_segment[k] = 4.0 * kPi * static_cast<double>(per[k]) / n;
  return r;
}

EfficiencyReport efficiency(const Polyline& poly) {
  EfficiencyReport e;
  e.horizon = horizon(poly).total;
  e.length = length(poly);
  e.efficiency = e.horizon / e.length;
  return e;
}

}  // namespace inspectra
