#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "inspectra/error.hpp"

namespace inspectra::cli {

namespace {

constexpr double kSize = 640.0;
constexpr double kHalf = kSize / 2.0;

const char* const kStageColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b"};

std::string header(double w, double h) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
      "viewBox=\"0 0 {0:.0f} {1:.0f}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      w, h);
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const std::string& style) {
  std::string s = "<polyline fill=\"none\" " + style + " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s += fmt::format("{}{:.3f},{:.3f}", i ? " " : "", pts[i].first, pts[i].second);
  }
  return s + "\"/>\n";
}

std::string circle(double cx, double cy, double r, const std::string& style) {
  return fmt::format("<circle cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" fill=\"none\" {}/>\n", cx, cy,
                     r, style);
}

std::string text(double x, double y, const std::string& body, const char* anchor = "start") {
  return fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"monospace\" font-size=\"12\" "
                     "text-anchor=\"{}\">{}</text>\n",
                     x, y, anchor, body);
}

}  // namespace

std::string curve_svg(const Polyline& poly) {
  // Azimuth 35 deg about z, then elevation 20 deg.
  const double az = 35.0 * std::numbers::pi / 180.0, el = 20.0 * std::numbers::pi / 180.0;
  const double ca = std::cos(az), sa = std::sin(az), ce = std::cos(el), se = std::sin(el);
  struct Screen {
    double x, y, depth;
  };
  std::vector<Screen> pts;
  double extent = 1.0;
  for (const auto& v : poly.vertices()) {
    const double x = v.size() > 0 ? v[0] : 0.0, y = v.size() > 1 ? v[1] : 0.0,
                 z = v.size() > 2 ? v[2] : 0.0;
    const double x1 = ca * x - sa * y, y1 = sa * x + ca * y;
    const double sx = x1, sy = ce * z - se * y1, depth = ce * y1 + se * z;
    pts.push_back({sx, sy, depth});
    extent = std::max(extent, std::hypot(sx, sy));
  }
  const double scale = (kHalf - 30.0) / extent;
  auto map = [&](const Screen& p) { return std::pair{kHalf + scale * p.x, kHalf - scale * p.y}; };

  std::string s = header(kSize, kSize);
  s += circle(kHalf, kHalf, scale, "stroke=\"#999999\" stroke-width=\"1\"");
  // Back segments first, dashed; then the front ones.
  const std::size_t segs = poly.segment_count();
  for (int front = 0; front < 2; ++front) {
    std::vector<std::pair<double, double>> run;
    auto flush = [&] {
      if (run.size() >= 2) {
        s += polyline(run, front ? "stroke=\"#c0392b\" stroke-width=\"2\""
                                 : "stroke=\"#e6a19a\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\"");
      }
      run.clear();
    };
    for (std::size_t i = 0; i < segs; ++i) {
      const Screen& a = pts[i];
      const Screen& b = pts[(i + 1) % pts.size()];
      const bool is_front = a.depth + b.depth <= 0.0;
      if (is_front != static_cast<bool>(front)) {
        flush();
        continue;
      }
      if (run.empty()) run.push_back(map(a));
      run.push_back(map(b));
    }
    flush();
  }
  s += text(10, 20, fmt::format("vertices {} length {:.6f}", poly.size(), length(poly)));
  return s + "</svg>\n";
}

std::string unfolded_svg(const UnfoldedCurve& unf, const DecompositionReport* report) {
  const UnfoldedCurve& u = report ? report->refined : unf;
  double extent = 1.0;
  for (const auto& p : u.planar) extent = std::max(extent, p.norm());
  const double scale = (kHalf - 30.0) / extent;
  auto map = [&](std::size_t i) {
    return std::pair{kHalf + scale * u.planar[i].x(), kHalf - scale * u.planar[i].y()};
  };
  std::string s = header(kSize, kSize);
  s += circle(kHalf, kHalf, scale, "stroke=\"#999999\" stroke-width=\"1\"");
  s += fmt::format("<circle cx=\"{0:.3f}\" cy=\"{0:.3f}\" r=\"2\" fill=\"black\"/>\n", kHalf);

  std::vector<int> colour(u.segment_count(), -1);
  if (report) {
    for (const auto& sp : report->spirals) {
      const std::size_t lo = std::min(sp.start_index, sp.end_index);
      const std::size_t hi = std::max(sp.start_index, sp.end_index);
      for (std::size_t j = lo; j < hi && j < colour.size(); ++j) {
        colour[j] = sp.direction == SpiralDirection::forward ? 0 : 1;
      }
    }
  }
  const char* styles[] = {"stroke=\"#777777\" stroke-width=\"1.5\"",
                          "stroke=\"#1f77b4\" stroke-width=\"2\"",
                          "stroke=\"#d62728\" stroke-width=\"2\""};
  std::size_t j = 0;
  while (j < colour.size()) {
    std::size_t k = j;
    while (k < colour.size() && colour[k] == colour[j]) ++k;
    std::vector<std::pair<double, double>> run;
    for (std::size_t i = j; i <= k; ++i) run.push_back(map(i));
    s += polyline(run, styles[colour[j] + 1]);
    j = k;
  }
  const auto [lo, hi] = std::minmax_element(u.radius.begin(), u.radius.end());
  s += text(10, 20, fmt::format("radius [{:.6f}, {:.6f}]", u.radius.empty() ? 0.0 : *lo,
                                u.radius.empty() ? 0.0 : *hi));
  if (report) s += text(10, 36, fmt::format("spirals {}", report->spirals.size()));
  return s + "</svg>\n";
}

std::string trace_svg(const std::vector<TraceRow>& rows) {
  const double w = 800.0, h = 480.0, left = 80.0, right = 20.0, top = 30.0, bottom = 50.0;
  std::string s = header(w, h);
  if (rows.empty()) return s + text(w / 2, h / 2, "empty trace", "middle") + "</svg>\n";
  double lo = rows.front().length, hi = lo;
  for (const auto& r : rows) lo = std::min(lo, r.length), hi = std::max(hi, r.length);
  const double target = 4.0 * std::numbers::pi;
  lo = std::min(lo, target);
  if (hi - lo < 1e-12) hi = lo + 1.0;
  const double n = static_cast<double>(std::max<std::size_t>(rows.size() - 1, 1));
  auto X = [&](std::size_t i) { return left + (w - left - right) * static_cast<double>(i) / n; };
  auto Y = [&](double v) { return top + (h - top - bottom) * (hi - v) / (hi - lo); };

  s += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
                   "fill=\"none\" stroke=\"black\"/>\n",
                   left, top, w - left - right, h - top - bottom);
  s += polyline({{left, Y(target)}, {w - right, Y(target)}},
                "stroke=\"#999999\" stroke-dasharray=\"5 4\"");
  s += text(w - right - 4, Y(target) - 4, "4pi", "end");
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t k = i;
    std::vector<std::pair<double, double>> run;
    while (k < rows.size() && rows[k].stage == rows[i].stage) {
      run.emplace_back(X(k), Y(rows[k].length));
      ++k;
    }
    if (run.size() == 1) run.push_back(run.front());
    const std::size_t c = static_cast<std::size_t>(std::max(rows[i].stage, 0)) % std::size(kStageColors);
    s += polyline(run, fmt::format("stroke=\"{}\" stroke-width=\"1.5\"", kStageColors[c]));
    i = k;
  }
  s += text(left - 6, top + 4, fmt::format("{:.4f}", hi), "end");
  s += text(left - 6, h - bottom, fmt::format("{:.4f}", lo), "end");
  s += text(left, h - bottom + 20, "0");
  s += text(w - right, h - bottom + 20, fmt::format("{}", rows.size() - 1), "end");
  s += text((left + w - right) / 2, h - 12, "iteration", "middle");
  s += text(left, 18, "length");
  return s + "</svg>\n";
}

std::vector<TraceRow> parse_trace_csv(const std::string& body) {
  std::istringstream in(body);
  std::string line;
  if (!std::getline(in, line) || line.rfind("iteration,", 0) != 0) {
    throw ParseError("trace CSV must start with an 'iteration,...' header");
  }
  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 9) throw ParseError(fmt::format("trace CSV line {}: expected 9 fields", lineno));
    try {
      TraceRow r;
      r.iteration = std::stoi(f[0]);
      r.stage = std::stoi(f[1]);
      r.weight = std::stod(f[2]);
      r.length = std::stod(f[3]);
      r.merit = std::stod(f[4]);
      r.worst_slack = std::stod(f[5]);
      r.step = std::stod(f[6]);
      r.accepted = f[7] == "1";
      r.resampled = f[8] == "1";
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ParseError(fmt::format("trace CSV line {}: bad number", lineno));
    }
  }
  return rows;
}

}  // namespace inspectra::cli
