#include "inspectra/hull.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "inspectra/error.hpp"
#include "inspectra/lp.hpp"
#include "inspectra/parallel.hpp"

namespace inspectra {

int affine_rank(std::span<const Point> points) {
  if (points.size() < 2) return 0;
  const auto dim = points.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(points.size() - 1), dim);
  for (std::size_t i = 1; i < points.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i - 1)) = (points[i] - points[0]).transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > 1e-10 * s[0]) ++rank;
  }
  return rank;
}

// --- 3-D incremental hull ----------------------------------------------------

namespace {

using Vec3 = Eigen::Vector3d;

struct Face {
  int a, b, c;
  Vec3 normal;
  double offset;
  bool alive = true;
};

class Hull3 {
 public:
  explicit Hull3(std::vector<Vec3> pts) : p_(std::move(pts)) {
    Vec3 lo = p_[0], hi = p_[0];
    for (const auto& q : p_) {
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
    eps_ = 1e-12 * std::max(1.0, (hi - lo).norm());
  }

  void build() {
    const auto seed = initial_simplex();
    interior_ = (p_[seed[0]] + p_[seed[1]] + p_[seed[2]] + p_[seed[3]]) / 4.0;
    add_face(seed[0], seed[1], seed[2]);
    add_face(seed[0], seed[1], seed[3]);
    add_face(seed[0], seed[2], seed[3]);
    add_face(seed[1], seed[2], seed[3]);
    std::vector<bool> used(p_.size(), false);
    for (int s : seed) used[static_cast<std::size_t>(s)] = true;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      if (!used[i]) insert(static_cast<int>(i));
    }
  }

  const std::vector<Face>& faces() const { return faces_; }

 private:
  static long long key(int a, int b) { return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b); }

  std::array<int, 4> initial_simplex() const {
    const int n = static_cast<int>(p_.size());
    int i0 = 0;
    for (int i = 1; i < n; ++i) {
      if (p_[i].x() < p_[i0].x()) i0 = i;
    }
    int i1 = i0;
    double best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d = (p_[i] - p_[i0]).squaredNorm();
      if (d > best) best = d, i1 = i;
    }
    const Vec3 dir = (p_[i1] - p_[i0]).normalized();
    int i2 = i0;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      const Vec3 v = p_[i] - p_[i0];
      const double d = (v - v.dot(dir) * dir).squaredNorm();
      if (d > best) best = d, i2 = i;
    }
    const Vec3 nrm = (p_[i1] - p_[i0]).cross(p_[i2] - p_[i0]).normalized();
    int i3 = i0;
    best = -1.0;
    for (int i = 0; i < n; ++i) {
      const double d = std::abs((p_[i] - p_[i0]).dot(nrm));
      if (d > best) best = d, i3 = i;
    }
    return {i0, i1, i2, i3};
  }

  void add_face(int a, int b, int c) {
    Vec3 n = (p_[b] - p_[a]).cross(p_[c] - p_[a]);
    if (n.dot(p_[a] - interior_) < 0.0) {
      std::swap(b, c);
      n = -n;
    }
    n.normalize();
    const int id = static_cast<int>(faces_.size());
    faces_.push_back(Face{a, b, c, n, n.dot(p_[a]), true});
    edge_owner_[key(a, b)] = id;
    edge_owner_[key(b, c)] = id;
    edge_owner_[key(c, a)] = id;
  }

  void insert(int pi) {
    const Vec3& q = p_[static_cast<std::size_t>(pi)];
    std::vector<int> visible;
    for (int f = 0; f < static_cast<int>(faces_.size()); ++f) {
      const Face& face = faces_[static_cast<std::size_t>(f)];
      if (face.alive && face.normal.dot(q) - face.offset > eps_) visible.push_back(f);
    }
    if (visible.empty()) return;
    std::vector<std::pair<int, int>> horizon;
    for (int f : visible) faces_[static_cast<std::size_t>(f)].alive = false;
    for (int f : visible) {
      const Face& face = faces_[static_cast<std::size_t>(f)];
      const int e[3][2] = {{face.a, face.b}, {face.b, face.c}, {face.c, face.a}};
      for (const auto& ed : e) {
        const auto it = edge_owner_.find(key(ed[1], ed[0]));
        if (it != edge_owner_.end() && faces_[static_cast<std::size_t>(it->second)].alive) {
          horizon.emplace_back(ed[0], ed[1]);
        }
      }
    }
    for (int f : visible) {
      const Face& face = faces_[static_cast<std::size_t>(f)];
      edge_owner_.erase(key(face.a, face.b));
      edge_owner_.erase(key(face.b, face.c));
      edge_owner_.erase(key(face.c, face.a));
    }
    for (const auto& [a, b] : horizon) add_face_oriented(a, b, pi);
  }

  // Horizon edges keep the winding of the removed face, so (a, b, apex) is
  // already outward; no interior-point test needed.
  void add_face_oriented(int a, int b, int c) {
    Vec3 n = (p_[b] - p_[a]).cross(p_[c] - p_[a]);
    n.normalize();
    const int id = static_cast<int>(faces_.size());
    faces_.push_back(Face{a, b, c, n, n.dot(p_[a]), true});
    edge_owner_[key(a, b)] = id;
    edge_owner_[key(b, c)] = id;
    edge_owner_[key(c, a)] = id;
  }

  std::vector<Vec3> p_;
  std::vector<Face> faces_;
  std::unordered_map<long long, int> edge_owner_;
  Vec3 interior_ = Vec3::Zero();
  double eps_ = 0.0;
};

}  // namespace

HullFacets convex_hull_3d(std::span<const Point> points) {
  for (const auto& p : points) {
    if (p.size() != 3) throw UnsupportedDimension(static_cast<int>(p.size()));
  }
  if (points.size() < 4) throw DegenerateHull(affine_rank(points), 3);
  const int rank = affine_rank(points);
  if (rank < 3) throw DegenerateHull(rank, 3);

  std::vector<Vec3> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.emplace_back(p[0], p[1], p[2]);
  Hull3 h(pts);
  h.build();

  HullFacets out;
  out.dim = 3;
  std::vector<bool> extreme(points.size(), false);
  std::vector<Vec3> normals;
  for (const auto& f : h.faces()) {
    if (!f.alive) continue;
    extreme[static_cast<std::size_t>(f.a)] = true;
    extreme[static_cast<std::size_t>(f.b)] = true;
    extreme[static_cast<std::size_t>(f.c)] = true;
    normals.push_back(f.normal);
  }
  // Merge coplanar triangles: identical normals describe the same facet.
  std::sort(normals.begin(), normals.end(), [](const Vec3& x, const Vec3& y) {
    return std::lexicographical_compare(x.data(), x.data() + 3, y.data(), y.data() + 3);
  });
  std::vector<Vec3> unique;
  for (const auto& n : normals) {
    bool dup = false;
    for (auto it = unique.rbegin(); it != unique.rend() && std::abs((*it)[0] - n[0]) <= 1e-9; ++it) {
      if ((*it - n).norm() <= 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(n);
  }
  out.facets.reserve(unique.size());
  for (const auto& n : unique) {
    double b = -std::numeric_limits<double>::infinity();
    for (const auto& q : pts) b = std::max(b, n.dot(q));
    Point normal(3);
    normal << n[0], n[1], n[2];
    out.facets.push_back(Facet{std::move(normal), b});
  }
  for (std::size_t i = 0; i < extreme.size(); ++i) {
    if (extreme[i]) out.extreme_indices.push_back(i);
  }
  return out;
}

InradiusResult chebyshev_inradius(const HullFacets& hull) {
  const int d = hull.dim;
  const auto nf = static_cast<Eigen::Index>(hull.facets.size());
  if (nf == 0) throw MalformedHull("empty facet list");
  // Dual: minimize sum b_f y_f  s.t.  sum y_f u_f = 0,  sum y_f = 1,  y >= 0.
  Eigen::MatrixXd A(d + 1, nf);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  Eigen::VectorXd c(nf);
  for (Eigen::Index f = 0; f < nf; ++f) {
    const Facet& facet = hull.facets[static_cast<std::size_t>(f)];
    A.col(f).head(d) = facet.normal;
    A(d, f) = 1.0;
    c[f] = facet.offset;
  }
  b[d] = 1.0;
  const LpSolution sol = solve_standard_lp(A, b, c);
  if (sol.status == LpStatus::infeasible) {
    throw MalformedHull("facets do not bound a region (inradius LP unbounded)");
  }
  if (sol.status == LpStatus::unbounded) {
    throw MalformedHull("facets bound an empty region (inradius LP infeasible)");
  }
  InradiusResult r;
  r.center = sol.multipliers.head(d);
  r.radius = sol.multipliers[d];
  r.kind = InradiusKind::exact;
  if (r.radius < 0.0) throw MalformedHull("facets bound an empty region");
  return r;
}

double support(std::span<const Point> points, const Point& u) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) best = std::max(best, p.dot(u));
  return best;
}

// --- Minimax over the sphere -------------------------------------------------

namespace {

// Orthonormal basis of the complement of the unit vector u (n x (n-1)).
Eigen::MatrixXd tangent_basis(const Point& u) {
  const auto n = u.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

struct Smoothed {
  double value;
  Eigen::VectorXd grad;
};

Smoothed smoothed_support(const Eigen::MatrixXd& P, const Point& u, double tau) {
  const Eigen::VectorXd c = P.transpose() * u;
  const double m = c.maxCoeff();
  const Eigen::ArrayXd w = ((c.array() - m) / tau).exp();
  const double s = w.sum();
  return {m + tau * std::log(s), P * (w.matrix() / s)};
}

Eigen::MatrixXd as_matrix(std::span<const Point> points) {
  const auto n = points.front().size();
  Eigen::MatrixXd P(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) P.col(static_cast<Eigen::Index>(i)) = points[i];
  return P;
}

Point smoothed_descent(const Eigen::MatrixXd& P, Point u, double scale, int iters) {
  constexpr int kLevels = 6;
  const int per_level = std::max(4, iters / kLevels);
  double tau = 0.1 * scale;
  for (int level = 0; level < kLevels; ++level, tau *= 0.3) {
    double eta = 0.2;
    Smoothed cur = smoothed_support(P, u, tau);
    for (int it = 0; it < per_level && eta > 1e-12; ++it) {
      Eigen::VectorXd g = cur.grad - cur.grad.dot(u) * u;
      const double gn = g.norm();
      if (gn < 1e-15 * scale) break;
      Point trial = (u - eta * g / gn).normalized();
      const Smoothed next = smoothed_support(P, trial, tau);
      if (next.value < cur.value) {
        u = std::move(trial);
        cur = next;
        eta = std::min(1.0, eta * 1.5);
      } else {
        eta *= 0.5;
      }
    }
  }
  return u;
}

}  // namespace

Point polish_direction(std::span<const Point> points, const Point& start, int max_steps) {
  const auto n = start.size();
  Point u = start.normalized();
  if (n < 2) return u;
  const Eigen::MatrixXd P = as_matrix(points);
  Eigen::VectorXd norms(P.cols());
  for (Eigen::Index i = 0; i < P.cols(); ++i) norms[i] = P.col(i).norm();
  const double scale = std::max(1e-300, norms.maxCoeff());
  double radius = 0.2;
  Eigen::VectorXd c = P.transpose() * u;
  double f = c.maxCoeff();
  for (int step = 0; step < max_steps && radius > 1e-15; ++step) {
    const double reach = 2.0 * radius * std::sqrt(static_cast<double>(n - 1));
    std::vector<Eigen::Index> cand;
    for (Eigen::Index i = 0; i < P.cols(); ++i) {
      if (c[i] >= f - reach * norms[i]) cand.push_back(i);
    }
    constexpr std::size_t kMaxCandidates = 256;
    if (cand.size() > kMaxCandidates) {
      std::partial_sort(cand.begin(), cand.begin() + kMaxCandidates, cand.end(),
                        [&](Eigen::Index a, Eigen::Index b) { return c[a] > c[b] || (c[a] == c[b] && a < b); });
      cand.resize(kMaxCandidates);
    }
    const Eigen::MatrixXd T = tangent_basis(u);
    const auto k = static_cast<Eigen::Index>(cand.size());
    const Eigen::Index t = n - 1;
    // Dual of  min s  s.t.  c_i + a_i^T delta <= s,  |delta|_inf <= radius.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(t + 1, k + 2 * t);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(t + 1);
    Eigen::VectorXd cost(k + 2 * t);
    for (Eigen::Index j = 0; j < k; ++j) {
      A.col(j).head(t) = T.transpose() * P.col(cand[static_cast<std::size_t>(j)]);
      A(t, j) = 1.0;
      cost[j] = -c[cand[static_cast<std::size_t>(j)]];
    }
    for (Eigen::Index j = 0; j < t; ++j) {
      A(j, k + j) = -1.0;
      A(j, k + t + j) = 1.0;
      cost[k + j] = radius;
      cost[k + t + j] = radius;
    }
    b[t] = 1.0;
    const LpSolution sol = solve_standard_lp(A, b, cost, 1e-13);
    if (sol.status != LpStatus::optimal) break;
    const Eigen::VectorXd delta = -sol.multipliers.head(t);
    const double predicted = -sol.multipliers[t];
    if (f - predicted <= 1e-15 * scale) break;
    const Point trial = (u + T * delta).normalized();
    const Eigen::VectorXd ct = P.transpose() * trial;
    const double ft = ct.maxCoeff();
    if (ft < f) {
      const double ratio = (f - ft) / (f - predicted);
      u = trial;
      c = ct;
      f = ft;
      if (ratio > 0.75) radius = std::min(0.5, radius * 2.0);
    } else {
      radius *= 0.25;
    }
  }
  return u;
}

SupportMinimum minimize_support(std::span<const Point> points, const MinimaxOptions& opts) {
  if (points.empty()) throw InvalidArgument("minimize_support needs points");
  const auto n = points.front().size();
  if (n == 1) {
    Point plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    const double hp = support(points, plus), hm = support(points, minus);
    return hp <= hm ? SupportMinimum{plus, hp, 0} : SupportMinimum{minus, hm, 1};
  }
  const Eigen::MatrixXd P = as_matrix(points);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < P.cols(); ++i) scale = std::max(scale, P.col(i).norm());
  if (scale == 0.0) scale = 1.0;

  const auto restarts = static_cast<std::size_t>(std::max(1, opts.restarts));
  std::vector<Point> found(restarts);
  std::vector<double> value(restarts);
  parallel_for(restarts, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      CounterRng rng(opts.seed, r);
      found[r] = smoothed_descent(P, rng.unit_vector(static_cast<int>(n)), scale, opts.iters);
      value[r] = (P.transpose() * found[r]).maxCoeff();
    }
  });
  std::vector<std::size_t> order(restarts);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
  if (opts.polish) {
    const std::size_t top = std::min<std::size_t>(4, restarts);
    parallel_for(top, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t r = order[i];
        found[r] = polish_direction(points, found[r]);
        value[r] = (P.transpose() * found[r]).maxCoeff();
      }
    });
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < restarts; ++r) {
    if (value[r] < value[best]) best = r;
  }
  return {found[best], value[best], static_cast<int>(best)};
}

InradiusResult origin_inradius_minimax(std::span<const Point> points, int restarts, int iters) {
  if (points.empty()) throw InvalidArgument("origin_inradius_minimax needs points");
  const auto n = points.front().size();
  if (n < 2) throw UnsupportedDimension(static_cast<int>(n));
  MinimaxOptions opts;
  opts.restarts = restarts;
  opts.iters = iters;
  const SupportMinimum m = minimize_support(points, opts);
  if (m.value <= 0.0) throw OriginNotInterior(m.value);
  InradiusResult r;
  r.radius = m.value;
  r.center = Point::Zero(n);
  r.kind = InradiusKind::upper_bound;
  r.witness_direction = m.direction;
  return r;
}

std::vector<Point> fibonacci_sphere(int count) {
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    Point p(3);
    p << r * std::cos(phi), r * std::sin(phi), z;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Point> icosphere(int level) {
  if (level < 0) throw InvalidArgument("icosphere level must be >= 0");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  std::vector<Point> out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(Point(p));
  return out;
}

std::vector<Point> sphere_directions(int dim, int count, std::uint64_t seed) {
  if (dim == 3) return fibonacci_sphere(count);
  std::vector<Point> out;
  if (dim == 1) {
    out.push_back(Point::Constant(1, 1.0));
    out.push_back(Point::Constant(1, -1.0));
    return out;
  }
  out.reserve(static_cast<std::size_t>(count));
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * std::numbers::pi * (i + 0.5) / count;
      Point p(2);
      p << std::cos(a), std::sin(a);
      out.push_back(std::move(p));
    }
    return out;
  }
  for (int i = 0; i < count; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    out.push_back(rng.unit_vector(dim));
  }
  return out;
}

SphereContainment contains_unit_sphere(std::span<const Point> points, int directions) {
  if (points.empty()) throw InvalidArgument("contains_unit_sphere needs points");
  if (directions < 1) throw InvalidArgument("contains_unit_sphere needs directions >= 1");
  const int n = static_cast<int>(points.front().size());
  const Eigen::MatrixXd P = as_matrix(points);
  const std::vector<Point> dirs = sphere_directions(n, directions);
  std::vector<double> slack(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) slack[i] = (P.transpose() * dirs[i]).maxCoeff() - 1.0;

  SphereContainment out;
  out.min_slack = std::numeric_limits<double>::infinity();
  auto consider = [&](const Point& u) {
    const double s = (P.transpose() * u).maxCoeff() - 1.0;
    if (s < out.min_slack) {
      out.min_slack = s;
      out.worst_direction = u;
    }
  };
  for (const auto& d : dirs) consider(d);
  if (n == 3) {
    try {
      for (const auto& f : convex_hull_3d(points).facets) consider(f.normal);
    } catch (const DegenerateHull&) {
      // Flat point sets: the sampled directions already expose the deficit.
    }
  }
  if (n >= 2) {
    std::vector<std::size_t> order(dirs.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t top = std::min<std::size_t>(4, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](std::size_t a, std::size_t b) { return slack[a] < slack[b]; });
    for (std::size_t i = 0; i < top; ++i) consider(polish_direction(points, dirs[order[i]]));
  }
  out.contains = out.min_slack >= -kContainmentTol;
  return out;
}

std::string hull_to_json(const HullFacets& hull) {
  std::string s = fmt::format("{{\"dim\": {}, \"facets\": [", hull.dim);
  for (std::size_t i = 0; i < hull.facets.size(); ++i) {
    const Facet& f = hull.facets[i];
    s += i == 0 ? "\n  " : ",\n  ";
    s += "{\"normal\": [";
    for (Eigen::Index k = 0; k < f.normal.size(); ++k) {
      if (k) s += ", ";
      s += format_number(f.normal[k]);
    }
    s += "], \"offset\": " + format_number(f.offset) + "}";
  }
  s += "\n]}\n";
  return s;
}

}  // namespace inspectra
