#include "inspectra/unfolding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "inspectra/error.hpp"
#include "inspectra/horizon.hpp"

namespace inspectra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-6;

// Angle between two nonzero vectors, accurate for nearly (anti)parallel pairs.
double angle_between(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ua = a / a.norm();
  const Eigen::VectorXd ub = b / b.norm();
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

Eigen::Vector2d polar(double rho, double theta, int k) {
  const double phi = theta + (k - 1) * kPi;
  return {rho * std::cos(phi), rho * std::sin(phi)};
}

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

Eigen::Vector3d lift(const Eigen::Vector2d& p) { return {p.x(), p.y(), 0.0}; }

}  // namespace

Polyline UnfoldedCurve::planar_polyline() const {
  std::vector<Point> v;
  v.reserve(planar.size());
  for (const auto& p : planar) v.push_back(Eigen::Vector2d(p));
  return Polyline(std::move(v), false);
}

UnfoldedCurve unfold(const Polyline& poly, double tol) {
  UnfoldedCurve u;
  u.source_closed = poly.closed();
  const std::size_t n = poly.size();

  std::vector<Point> chain;
  std::vector<long> index;
  if (poly.closed()) {
    double rmin = poly.vertex(0).norm();
    for (std::size_t j = 1; j < n; ++j) rmin = std::min(rmin, poly.vertex(j).norm());
    std::size_t start = 0;
    while (poly.vertex(start).norm() > rmin + 1e-12) ++start;
    u.start_shift = start;
    for (std::size_t j = 0; j <= n; ++j) {
      chain.push_back(poly.vertex((start + j) % n));
      index.push_back(static_cast<long>((start + j) % n));
    }
  } else {
    chain = poly.vertices();
    for (std::size_t j = 0; j < n; ++j) index.push_back(static_cast<long>(j));
  }

  // Insert interior passage points.
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
    const Point& a = chain[j];
    const Point& b = chain[j + 1];
    const double ra = a.norm(), rb = b.norm();
    if (ra <= tol && rb <= tol) {
      throw InvalidArgument("unfold: segment with both endpoints at the origin");
    }
    u.source.push_back(a);
    u.source_index.push_back(index[j]);
    if (ra <= tol || rb <= tol) continue;
    const double f = closest_fraction_to_origin(a, b);
    if (f <= 0.0 || f >= 1.0) continue;
    const Point foot = a + f * (b - a);
    if (foot.norm() <= tol) {
      u.source.push_back(foot);
      u.source_index.push_back(-1);
    }
  }
  u.source.push_back(chain.back());
  u.source_index.push_back(index.back());

  const std::size_t m = u.source.size();
  u.radius.resize(m);
  u.angle.resize(m);
  u.branch.resize(m);
  u.planar.resize(m);
  double theta = 0.0;
  int k = 1;
  for (std::size_t j = 0; j < m; ++j) {
    const double rho = u.source[j].norm();
    if (j > 0) {
      const double rp = u.radius[j - 1];
      if (rp > tol && rho > tol) theta += angle_between(u.source[j - 1], u.source[j]);
    }
    u.radius[j] = rho;
    u.angle[j] = theta;
    u.branch[j] = k;
    u.planar[j] = polar(rho, theta, k);
    if (rho <= tol && j > 0 && j + 1 < m) ++k;
  }
  return u;
}

double verify_alpha(const Polyline& poly, const UnfoldedCurve& unf, double tol) {
  for (std::size_t j = 0; j < unf.size(); ++j) {
    const long idx = unf.source_index[j];
    if (idx < 0) continue;
    if (static_cast<std::size_t>(idx) >= poly.size() ||
        (poly.vertex(static_cast<std::size_t>(idx)) - unf.source[j]).norm() > tol) {
      throw InvalidArgument("verify_alpha: unfolded curve does not match the polyline");
    }
  }
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < unf.size(); ++j) {
    const Point& a = unf.source[j];
    const Point& b = unf.source[j + 1];
    const Point mid = 0.5 * (a + b);
    if (mid.norm() <= tol) continue;
    const Point d = b - a;
    const double chord = d.norm();
    const double drho = (unf.radius[j + 1] - unf.radius[j]) / chord;
    const double cos_src = mid.dot(d) / (mid.norm() * chord);
    const Eigen::Vector2d pm = 0.5 * (unf.planar[j] + unf.planar[j + 1]);
    const Eigen::Vector2d pd = unf.planar[j + 1] - unf.planar[j];
    const double cos_unf = pm.dot(pd) / (pm.norm() * pd.norm());
    worst = std::max({worst, std::abs(cos_src - drho), std::abs(cos_unf - drho)});
  }
  return worst;
}

namespace {

// Inserts the foot of the perpendicular from o wherever the radius dips on a
// segment interior, so that the radius is monotone on every segment.
UnfoldedCurve refine_at_feet(const UnfoldedCurve& unf, double tol) {
  UnfoldedCurve r;
  r.source_closed = unf.source_closed;
  r.start_shift = unf.start_shift;
  auto push = [&](std::size_t j) {
    r.radius.push_back(unf.radius[j]);
    r.angle.push_back(unf.angle[j]);
    r.branch.push_back(unf.branch[j]);
    r.planar.push_back(unf.planar[j]);
    r.source.push_back(unf.source[j]);
    r.source_index.push_back(unf.source_index[j]);
  };
  for (std::size_t j = 0; j + 1 < unf.size(); ++j) {
    push(j);
    const double ra = unf.radius[j], rb = unf.radius[j + 1];
    if (ra <= tol || rb <= tol) continue;
    const Eigen::Vector2d p = unf.planar[j], q = unf.planar[j + 1];
    const Eigen::Vector2d d = q - p;
    const double f = -p.dot(d) / d.squaredNorm();
    if (!(f > 1e-9 && f < 1.0 - 1e-9)) continue;
    const Eigen::Vector2d foot = p + f * d;
    const double rf = foot.norm();
    if (rf >= std::min(ra, rb) - tol) continue;
    const Point src = unf.source[j] + f * (unf.source[j + 1] - unf.source[j]);
    r.radius.push_back(rf);
    r.angle.push_back(unf.angle[j] + angle_between(unf.source[j], src));
    r.branch.push_back(unf.branch[j]);
    r.planar.push_back(foot);
    r.source.push_back(src);
    r.source_index.push_back(-1);
  }
  push(unf.size() - 1);
  return r;
}

// Local convexity with respect to o along a run traversed as v[0], v[1], ...
std::string convexity_failure(const std::vector<Eigen::Vector2d>& v) {
  if (v.size() < 3) return {};
  int orient = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const double t = cross2((v[i] - v[i - 1]).normalized(), (v[i + 1] - v[i]).normalized());
    if (std::abs(t) > 1e-9) {
      orient = t > 0 ? 1 : -1;
      break;
    }
  }
  if (orient == 0) return {};  // straight run
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Eigen::Vector2d tin = (v[i] - v[i - 1]).normalized();
    const Eigen::Vector2d tout = (v[i + 1] - v[i]).normalized();
    if (orient * cross2(tin, tout) < -1e-9) {
      return "turn sign changes at run vertex " + std::to_string(i);
    }
    const Eigen::Vector2d t = tin + tout;
    if (t.norm() < 1e-12) return "run folds back at vertex " + std::to_string(i);
    const Eigen::Vector2d inward = orient * Eigen::Vector2d(-t.y(), t.x()) / t.norm();
    if ((-v[i]).dot(inward) < -1e-9) {
      return "origin outside the local support line at run vertex " + std::to_string(i);
    }
  }
  return {};
}

}  // namespace

DecompositionReport spiral_decomposition(const UnfoldedCurve& unf, double tol) {
  if (unf.size() < 2) throw InvalidArgument("spiral_decomposition needs >= 2 vertices");
  DecompositionReport rep;
  rep.refined = refine_at_feet(unf, tol);
  const UnfoldedCurve& c = rep.refined;
  const std::size_t segs = c.segment_count();

  std::vector<int> cls(segs);
  for (std::size_t j = 0; j < segs; ++j) {
    const double d = c.radius[j + 1] - c.radius[j];
    cls[j] = d > tol ? 1 : (d < -tol ? -1 : 0);
  }

  auto seg_horizon = [&](std::size_t j) {
    return segment_horizon(lift(c.planar[j]), lift(c.planar[j + 1]));
  };
  auto seg_length = [&](std::size_t j) { return (c.planar[j + 1] - c.planar[j]).norm(); };

  std::size_t j = 0;
  while (j < segs) {
    if (cls[j] == 0) {
      rep.residual_segments.push_back(j);
      ++j;
      continue;
    }
    std::size_t e = j;
    while (e < segs && cls[e] == cls[j]) ++e;
    SpiralSegment s;
    s.start_index = j;
    s.end_index = e;
    s.direction = cls[j] > 0 ? SpiralDirection::forward : SpiralDirection::reversed;
    std::vector<Eigen::Vector2d> path;
    for (std::size_t i = j; i <= e; ++i) path.push_back(c.planar[i]);
    if (s.direction == SpiralDirection::reversed) std::reverse(path.begin(), path.end());
    const std::size_t start = s.direction == SpiralDirection::forward ? j : e;
    s.start_radius = c.radius[start];
    s.end_radius = c.radius[s.direction == SpiralDirection::forward ? e : j];
    s.strict = true;
    for (std::size_t i = 1; i < path.size(); ++i) {
      if (!(path[i].norm() - path[i - 1].norm() >= 1e-12)) s.strict = false;
    }

    // Start condition: at o, orthogonal, or a corner whose neighbours both
    // lie beyond the line through the start perpendicular to its position.
    const Eigen::Vector2d p = path[0];
    if (s.start_radius <= tol) {
      s.start_kind = SpiralStart::origin;
    } else {
      const Eigen::Vector2d out = path[1] - p;
      const double cosang = p.dot(out) / (p.norm() * out.norm());
      if (std::abs(cosang) <= std::sin(kAngleTol)) {
        s.start_kind = SpiralStart::orthogonal;
      } else {
        // Neighbour outside the run, on the side the spiral does not cover.
        std::optional<std::size_t> outside;
        std::optional<int> outside_cls;
        if (s.direction == SpiralDirection::forward && j > 0) {
          outside = j - 1;
          outside_cls = cls[j - 1];
        } else if (s.direction == SpiralDirection::reversed && e < segs) {
          outside = e + 1;
          outside_cls = cls[e];
        }
        bool supported = cosang >= 0.0;
        if (supported && outside && *outside_cls != 0) {
          const Eigen::Vector2d q = c.planar[*outside] - p;
          supported = q.dot(p) >= -std::sin(kAngleTol) * q.norm() * p.norm();
        }
        s.start_kind = supported ? SpiralStart::corner_support : SpiralStart::unsupported;
        if (!supported) {
          s.certified = false;
          s.diagnostic = "start is neither at o nor orthogonal to its position";
        }
      }
    }
    const std::string fail = convexity_failure(path);
    if (!fail.empty()) {
      s.certified = false;
      s.diagnostic = s.diagnostic.empty() ? fail : s.diagnostic + "; " + fail;
    }
    if (!s.certified) ++rep.certificate_failures;

    EfficiencyTerm term;
    term.piece = "spiral:" + std::to_string(rep.spirals.size());
    for (std::size_t i = j; i < e; ++i) {
      term.length += seg_length(i);
      term.horizon += seg_horizon(i);
    }
    term.efficiency = term.horizon / term.length;
    term.start_radius = s.start_radius;
    rep.efficiency_terms.push_back(term);
    rep.spirals.push_back(std::move(s));
    j = e;
  }
  if (!rep.residual_segments.empty()) {
    EfficiencyTerm term;
    term.piece = "residual";
    term.start_radius = c.radius[rep.residual_segments.front()];
    for (std::size_t i : rep.residual_segments) {
      term.length += seg_length(i);
      term.horizon += seg_horizon(i);
    }
    term.efficiency = term.horizon / term.length;
    rep.efficiency_terms.push_back(term);
  }

  const Polyline whole = unf.planar_polyline();
  rep.total_length = length(whole);
  rep.total_horizon = horizon(whole).total;
  double sum = 0.0;
  for (const auto& t : rep.efficiency_terms) sum += t.horizon;
  rep.identity_residual = std::abs(rep.total_horizon - sum);
  return rep;
}

std::vector<PieceCheck> spiral_efficiency_check(const DecompositionReport& report, double tol) {
  std::vector<PieceCheck> out;
  for (std::size_t i = 0; i < report.efficiency_terms.size(); ++i) {
    const EfficiencyTerm& t = report.efficiency_terms[i];
    PieceCheck pc;
    pc.piece = t.piece;
    pc.efficiency = t.efficiency;
    pc.pass = t.efficiency <= 2.0 + tol;
    if (i < report.spirals.size()) {
      pc.strict_expected = t.start_radius < 1.0 - tol;
      pc.strict_pass = !pc.strict_expected || t.efficiency < 2.0;
      pc.certified = report.spirals[i].certified;
    }
    out.push_back(pc);
  }
  return out;
}

namespace {

bool segments_intersect(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                        const Eigen::Vector2d& d) {
  const double eps = 1e-12;
  const double d1 = cross2(b - a, c - a), d2 = cross2(b - a, d - a);
  const double d3 = cross2(d - c, a - c), d4 = cross2(d - c, b - c);
  if (((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
      ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))) {
    return true;
  }
  auto on = [&](const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& x,
                double side) {
    return std::abs(side) <= eps && x.x() >= std::min(p.x(), q.x()) - eps &&
           x.x() <= std::max(p.x(), q.x()) + eps && x.y() >= std::min(p.y(), q.y()) - eps &&
           x.y() <= std::max(p.y(), q.y()) + eps;
  };
  return on(a, b, c, d1) || on(a, b, d, d2) || on(c, d, a, d3) || on(c, d, b, d4);
}

}  // namespace

std::size_t local_self_intersections(const UnfoldedCurve& unf, std::size_t window) {
  const std::size_t segs = unf.segment_count();
  const auto& p = unf.planar;
  std::size_t count = 0;
  for (std::size_t i = 0; i < segs; ++i) {
    if (i + 1 < segs) {
      const Eigen::Vector2d u = p[i + 1] - p[i], v = p[i + 2] - p[i + 1];
      if (std::abs(cross2(u, v)) <= 1e-12 * u.norm() * v.norm() && u.dot(v) < 0.0) ++count;
    }
    for (std::size_t k = i + 2; k < segs && k <= i + window; ++k) {
      if (segments_intersect(p[i], p[i + 1], p[k], p[k + 1])) ++count;
    }
  }
  return count;
}

const char* to_string(SpiralDirection d) {
  return d == SpiralDirection::forward ? "forward" : "reversed";
}

const char* to_string(SpiralStart s) {
  switch (s) {
    case SpiralStart::origin: return "origin";
    case SpiralStart::orthogonal: return "orthogonal";
    case SpiralStart::corner_support: return "corner_support";
    case SpiralStart::unsupported: return "unsupported";
  }
  return "unknown";
}

std::string decomposition_to_json(const DecompositionReport& report) {
  nlohmann::ordered_json j;
  j["total_length"] = report.total_length;
  j["total_horizon"] = report.total_horizon;
  j["efficiency"] = report.total_horizon / report.total_length;
  j["identity_residual"] = report.identity_residual;
  j["certificate_failures"] = report.certificate_failures;
  auto spirals = nlohmann::ordered_json::array();
  for (const auto& s : report.spirals) {
    nlohmann::ordered_json e;
    e["start_index"] = s.start_index;
    e["end_index"] = s.end_index;
    e["direction"] = to_string(s.direction);
    e["strict"] = s.strict;
    e["start_radius"] = s.start_radius;
    e["end_radius"] = s.end_radius;
    e["start_kind"] = to_string(s.start_kind);
    e["certified"] = s.certified;
    if (!s.diagnostic.empty()) e["diagnostic"] = s.diagnostic;
    spirals.push_back(e);
  }
  j["spirals"] = spirals;
  j["residual_segments"] = report.residual_segments;
  auto terms = nlohmann::ordered_json::array();
  for (const auto& t : report.efficiency_terms) {
    terms.push_back({{"piece", t.piece},
                     {"length", t.length},
                     {"horizon", t.horizon},
                     {"efficiency", t.efficiency},
                     {"start_radius", t.start_radius}});
  }
  j["efficiency_terms"] = terms;
  const UnfoldedCurve& c = report.refined;
  auto verts = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < c.size(); ++i) {
    verts.push_back({{"radius", c.radius[i]},
                     {"angle", c.angle[i]},
                     {"branch", c.branch[i]},
                     {"x", c.planar[i].x()},
                     {"y", c.planar[i].y()},
                     {"source_index", c.source_index[i]}});
  }
  j["unfolded"] = verts;
  return j.dump(2) + "\n";
}

}  // namespace inspectra
