#include "inspectra/curve.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "inspectra/error.hpp"

namespace inspectra {

Polyline::Polyline(std::vector<Point> vertices, bool closed)
    : vertices_(std::move(vertices)), closed_(closed) {
  if (vertices_.size() < 2) throw InvalidArgument("polyline needs at least 2 vertices");
  const auto dim = vertices_.front().size();
  if (dim < 1) throw InvalidArgument("polyline dimension must be positive");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Point& v = vertices_[i];
    if (v.size() != dim) {
      throw InvalidArgument(fmt::format("vertex {} has {} coordinates, expected {}", i,
                                        v.size(), dim));
    }
    if (!v.allFinite()) throw InvalidArgument(fmt::format("vertex {} is not finite", i));
  }
  for (std::size_t i = 0; i < segment_count(); ++i) {
    if (segment_start(i) == segment_end(i)) {
      throw InvalidArgument(fmt::format("zero-length segment at vertex {}", i));
    }
  }
  if (closed_ && vertices_.size() < 3) {
    throw InvalidArgument("closed polyline needs at least 3 vertices");
  }
}

std::vector<double> Polyline::arclengths() const {
  std::vector<double> s(segment_count() + 1, 0.0);
  for (std::size_t i = 0; i < segment_count(); ++i) {
    s[i + 1] = s[i] + (segment_end(i) - segment_start(i)).norm();
  }
  return s;
}

Point Polyline::point_at(double s, std::span<const double> cumulative) const {
  const std::size_t segs = segment_count();
  if (s <= 0.0) return vertices_.front();
  if (s >= cumulative[segs]) return segment_end(segs - 1);
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), s);
  const std::size_t i = std::min<std::size_t>(it - cumulative.begin() - 1, segs - 1);
  const double len = cumulative[i + 1] - cumulative[i];
  const double f = len > 0.0 ? (s - cumulative[i]) / len : 0.0;
  return segment_start(i) + f * (segment_end(i) - segment_start(i));
}

Polyline Polyline::reversed() const {
  std::vector<Point> v(vertices_.rbegin(), vertices_.rend());
  return Polyline(std::move(v), closed_);
}

Polyline Polyline::rotated(std::size_t start) const {
  if (!closed_) throw InvalidArgument("only closed polylines can be rotated");
  std::vector<Point> v(vertices_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = vertices_[(start + i) % v.size()];
  return Polyline(std::move(v), true);
}

void CurveFamily::validate() const {
  if (curves.empty()) return;
  const int d = curves.front().dim();
  for (const auto& c : curves) {
    if (c.dim() != d) throw InvalidArgument("curve family mixes dimensions");
    if (base_point_at_origin && c.vertex(0).norm() > 1e-12) {
      throw InvalidArgument("curve family member does not start at the origin");
    }
  }
}

double length(const Polyline& poly) {
  double total = 0.0;
  for (std::size_t i = 0; i < poly.segment_count(); ++i) {
    total += (poly.segment_end(i) - poly.segment_start(i)).norm();
  }
  return total;
}

namespace {

struct MarchResult {
  std::vector<Point> points;  // includes the start point
  bool completed = false;     // all steps found before running off the chain
  double final_arclength = 0.0;
};

// Walks `steps` chords of length c along the open chain `w`, each time taking
// the first point past the current one at distance exactly c.
MarchResult march(const std::vector<Point>& w, const std::vector<double>& cum, double c,
                  std::size_t steps) {
  MarchResult r;
  r.points.reserve(steps + 1);
  r.points.push_back(w.front());
  std::size_t seg = 0;
  double frac = 0.0;
  for (std::size_t step = 0; step < steps; ++step) {
    const Point& p = r.points.back();
    bool found = false;
    while (seg + 1 < w.size()) {
      const Point& a = w[seg];
      const Eigen::VectorXd d = w[seg + 1] - a;
      const Eigen::VectorXd ap = a - p;
      const double qa = d.squaredNorm();
      const double qb = 2.0 * ap.dot(d);
      const double qc = ap.squaredNorm() - c * c;
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
        if (t > frac && t <= 1.0) {
          frac = t;
          r.points.push_back(a + t * d);
          found = true;
          break;
        }
      }
      ++seg;
      frac = 0.0;
    }
    if (!found) {
      r.final_arclength = cum.back();
      return r;
    }
  }
  r.completed = true;
  r.final_arclength = cum[seg] + frac * (cum[seg + 1] - cum[seg]);
  return r;
}

}  // namespace

Polyline resample_constant_speed(const Polyline& poly, std::size_t m) {
  const bool closed = poly.closed();
  if (m < (closed ? 3u : 2u)) {
    throw InvalidArgument(fmt::format("resample needs m >= {} (got {})", closed ? 3 : 2, m));
  }
  std::vector<Point> w = poly.vertices();
  if (closed) w.push_back(poly.vertex(0));
  std::vector<double> cum(w.size(), 0.0);
  for (std::size_t i = 1; i < w.size(); ++i) cum[i] = cum[i - 1] + (w[i] - w[i - 1]).norm();
  const double total = cum.back();
  const std::size_t steps = closed ? m : m - 1;

  // Bisection on the common chord: too small ends before the chain's end,
  // too large runs off it. Chords never exceed arcs, so total/steps is an
  // upper bracket.
  double lo = 0.0;
  double hi = total / static_cast<double>(steps);
  {
    const MarchResult at_hi = march(w, cum, hi, steps);
    if (at_hi.completed && at_hi.final_arclength >= total * (1.0 - 1e-15)) {
      // Straight chain: the upper bracket lands on the end exactly.
      lo = hi;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const MarchResult r = march(w, cum, mid, steps);
    if (r.completed && r.final_arclength < total) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  MarchResult r = march(w, cum, lo, steps - 1);
  std::vector<Point> out = std::move(r.points);
  if (!closed) out.push_back(w.back());
  // Snapping can leave a duplicate only for pathological chains.
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Point& a, const Point& b) { return a == b; }),
            out.end());
  return Polyline(std::move(out), closed);
}

double closest_fraction_to_origin(const Point& a, const Point& b) {
  const Eigen::VectorXd d = b - a;
  const double t = -a.dot(d) / d.squaredNorm();
  return std::clamp(t, 0.0, 1.0);
}

std::vector<double> origin_passages(const Polyline& poly, double tol) {
  const std::size_t segs = poly.segment_count();
  const std::vector<double> cum = poly.arclengths();
  std::vector<double> frac(segs), dist(segs);
  for (std::size_t i = 0; i < segs; ++i) {
    const Point& a = poly.segment_start(i);
    const Point& b = poly.segment_end(i);
    frac[i] = closest_fraction_to_origin(a, b);
    dist[i] = (a + frac[i] * (b - a)).norm();
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < segs; ++i) {
    if (dist[i] > tol) continue;
    // An endpoint minimum is only local if the neighbouring segment does not
    // keep descending.
    if (frac[i] == 0.0 && (poly.closed() || i > 0)) {
      const std::size_t prev = (i + segs - 1) % segs;
      if (frac[prev] < 1.0) continue;
    }
    if (frac[i] == 1.0 && (poly.closed() || i + 1 < segs)) {
      const std::size_t next = (i + 1) % segs;
      if (frac[next] > 0.0) continue;
    }
    double s = cum[i] + frac[i] * (cum[i + 1] - cum[i]);
    if (poly.closed() && s >= cum[segs]) s = 0.0;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  const double eps = 1e-12 * std::max(1.0, cum[segs]);
  out.erase(std::unique(out.begin(), out.end(),
                        [eps](double a, double b) { return std::abs(a - b) <= eps; }),
            out.end());
  return out;
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  return fmt::format("{:.17g}", x);
}

std::string to_json(const Polyline& poly) {
  std::string s = fmt::format("{{\"dim\": {}, \"closed\": {}, \"vertices\": [", poly.dim(),
                              poly.closed() ? "true" : "false");
  for (std::size_t i = 0; i < poly.size(); ++i) {
    s += i == 0 ? "\n  [" : ",\n  [";
    const Point& v = poly.vertex(i);
    for (int k = 0; k < v.size(); ++k) {
      if (k) s += ", ";
      s += format_number(v[k]);
    }
    s += "]";
  }
  s += "\n]}\n";
  return s;
}

Polyline polyline_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("curve JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array()) {
    throw ParseError("curve JSON: missing \"vertices\" array");
  }
  const bool closed = j.value("closed", false);
  std::vector<Point> vs;
  for (const auto& row : j["vertices"]) {
    if (!row.is_array()) throw ParseError("curve JSON: vertex is not an array");
    Point p(static_cast<Eigen::Index>(row.size()));
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row[k].is_number()) throw ParseError("curve JSON: non-numeric coordinate");
      p[static_cast<Eigen::Index>(k)] = row[k].get<double>();
    }
    vs.push_back(std::move(p));
  }
  if (j.contains("dim") && !vs.empty() && j["dim"].get<int>() != vs.front().size()) {
    throw ParseError("curve JSON: \"dim\" does not match vertex length");
  }
  try {
    return Polyline(std::move(vs), closed);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("curve JSON: ") + e.what());
  }
}

std::string to_csv(const Polyline& poly) {
  std::string s;
  for (int k = 0; k < poly.dim(); ++k) s += fmt::format("{}x{}", k ? "," : "", k + 1);
  s += "\n";
  for (const auto& v : poly.vertices()) {
    for (int k = 0; k < v.size(); ++k) {
      if (k) s += ",";
      s += format_number(v[k]);
    }
    s += "\n";
  }
  return s;
}

Polyline polyline_from_csv(const std::string& text, bool closed) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("curve CSV: empty input");
  const auto columns = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ',') + 1);
  std::vector<Point> vs;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Point p(columns);
    std::istringstream row(line);
    std::string cell;
    Eigen::Index k = 0;
    while (std::getline(row, cell, ',')) {
      if (k >= columns) throw ParseError("curve CSV: too many columns");
      char* end = nullptr;
      p[k++] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw ParseError("curve CSV: bad number '" + cell + "'");
    }
    if (k != columns) throw ParseError("curve CSV: too few columns");
    vs.push_back(std::move(p));
  }
  try {
    return Polyline(std::move(vs), closed);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("curve CSV: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
  if (!out) throw ParseError("write failed for " + path);
}

Polyline read_polyline(const std::string& path, bool closed_hint_for_csv) {
  const std::string text = read_text_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return polyline_from_csv(text, closed_hint_for_csv);
  }
  return polyline_from_json(text);
}

}  // namespace inspectra
