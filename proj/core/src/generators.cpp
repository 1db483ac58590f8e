#include "inspectra/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "inspectra/error.hpp"
#include "inspectra/hull.hpp"

namespace inspectra {

namespace {
constexpr double kPi = std::numbers::pi;
}

Polyline baseball_curve(std::size_t per_arc) {
  if (per_arc < 2) throw InvalidArgument("baseball needs at least 2 points per arc");
  std::vector<Point> v;
  v.reserve(4 * per_arc);
  const double m = static_cast<double>(per_arc);
  auto push = [&](double x, double y, double z) { v.push_back(Eigen::Vector3d(x, y, z)); };
  for (std::size_t i = 0; i < per_arc; ++i) {
    const double t = kPi * static_cast<double>(i) / m;
    push(std::cos(t), std::sin(t), 1.0);
  }
  for (std::size_t i = 0; i < per_arc; ++i) {
    const double s = kPi * static_cast<double>(i) / m;
    push(-1.0, -std::sin(s), std::cos(s));
  }
  for (std::size_t i = 0; i < per_arc; ++i) {
    const double u = kPi * static_cast<double>(i) / m;
    push(-std::cos(u), std::sin(u), -1.0);
  }
  for (std::size_t i = 0; i < per_arc; ++i) {
    const double w = kPi * static_cast<double>(i) / m;
    push(1.0, -std::sin(w), -std::cos(w));
  }
  return Polyline(std::move(v), true);
}

Polyline circle_curve(double radius, std::size_t vertices, int dim, bool perimeter_match) {
  if (!(radius > 0.0)) throw InvalidArgument("circle radius must be positive");
  if (vertices < 3) throw InvalidArgument("circle needs at least 3 vertices");
  if (dim < 2) throw InvalidArgument("circle needs dim >= 2");
  const double n = static_cast<double>(vertices);
  const double r = perimeter_match ? radius * (kPi / n) / std::sin(kPi / n) : radius;
  std::vector<Point> v;
  v.reserve(vertices);
  for (std::size_t i = 0; i < vertices; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / n;
    Point p = Point::Zero(dim);
    p[0] = r * std::cos(t);
    p[1] = r * std::sin(t);
    v.push_back(std::move(p));
  }
  return Polyline(std::move(v), true);
}

Polyline random_inspection_curve(std::uint64_t seed, std::size_t anchors, std::size_t subdivide) {
  if (anchors < 4) throw InvalidArgument("random inspection curve needs >= 4 anchors");
  if (subdivide < 1) throw InvalidArgument("subdivide must be >= 1");
  for (std::uint64_t attempt = 0;; ++attempt) {
    CounterRng rng(seed, attempt);
    std::vector<Point> pts;
    pts.reserve(anchors);
    for (std::size_t i = 0; i < anchors; ++i) {
      const double r = rng.uniform(1.25, 2.5);
      pts.push_back(r * rng.unit_vector(3));
    }
    SphereContainment c = contains_unit_sphere(pts, 64);
    if (!c.contains) continue;
    // Greedy tour from anchor 0.
    std::vector<Point> tour{pts[0]};
    std::vector<bool> used(anchors, false);
    used[0] = true;
    for (std::size_t k = 1; k < anchors; ++k) {
      std::size_t best = anchors;
      double bd = 0.0;
      for (std::size_t j = 0; j < anchors; ++j) {
        if (used[j]) continue;
        const double d = (pts[j] - tour.back()).norm();
        if (best == anchors || d < bd) {
          best = j;
          bd = d;
        }
      }
      used[best] = true;
      tour.push_back(pts[best]);
    }
    std::vector<Point> v;
    v.reserve(anchors * subdivide);
    for (std::size_t k = 0; k < anchors; ++k) {
      const Point& a = tour[k];
      const Point& b = tour[(k + 1) % anchors];
      for (std::size_t j = 0; j < subdivide; ++j) {
        v.push_back(a + (static_cast<double>(j) / static_cast<double>(subdivide)) * (b - a));
      }
    }
    return Polyline(std::move(v), true);
  }
}

Polyline noisy_baseball(std::size_t vertices, double sigma, std::uint64_t seed) {
  if (vertices < 8) throw InvalidArgument("noisy baseball needs >= 8 vertices");
  const Polyline base = resample_constant_speed(baseball_curve(std::max<std::size_t>(vertices, 500)),
                                                vertices);
  std::vector<Point> v = base.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    CounterRng rng(seed, i);
    v[i] += sigma * rng.normal_vector(3);
  }
  return Polyline(std::move(v), true);
}

Polyline random_loop(std::uint64_t seed, std::size_t vertices, double target_length) {
  const Polyline base = resample_constant_speed(random_inspection_curve(seed, 24, 8), vertices);
  const double scale = std::max(1.0, target_length / length(base));
  std::vector<Point> v = base.vertices();
  for (auto& p : v) p *= scale;
  return Polyline(std::move(v), true);
}

}  // namespace inspectra
