#include "inspectra/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "inspectra/generators.hpp"
#include "inspectra/hull.hpp"

namespace inspectra {

namespace {

constexpr double kPi = std::numbers::pi;

using Mat3X = Eigen::Matrix3Xd;

Mat3X to_matrix(const Polyline& poly) {
  Mat3X x(3, static_cast<Eigen::Index>(poly.size()));
  for (std::size_t i = 0; i < poly.size(); ++i) x.col(static_cast<Eigen::Index>(i)) = poly.vertex(i);
  return x;
}

Polyline to_polyline(const Mat3X& x) {
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index i = 0; i < x.cols(); ++i) v.push_back(x.col(i));
  return Polyline(std::move(v), true);
}

double closed_length(const Mat3X& x) {
  const Eigen::Index n = x.cols();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) total += (x.col((i + 1) % n) - x.col(i)).norm();
  return total;
}

struct Merit {
  double value = 0.0;
  double length = 0.0;
  double worst_slack = 0.0;
};

// Merit and (optionally) its gradient. D holds one unit direction per column.
Merit evaluate(const Mat3X& x, const Mat3X& D, double w, Mat3X* grad) {
  const Eigen::Index n = x.cols();
  Merit m;
  if (grad) grad->setZero(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d d = x.col((i + 1) % n) - x.col(i);
    const double len = d.norm();
    m.length += len;
    if (grad && len > 0.0) {
      const Eigen::Vector3d t = d / len;
      grad->col(i) -= t;
      grad->col((i + 1) % n) += t;
    }
  }
  const Eigen::MatrixXd S = D.transpose() * x;  // directions x vertices
  double penalty = 0.0;
  m.worst_slack = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < S.rows(); ++k) {
    Eigen::Index arg = 0;
    const double h = S.row(k).maxCoeff(&arg);
    m.worst_slack = std::min(m.worst_slack, h - 1.0);
    const double viol = 1.0 - h;
    if (viol > 0.0) {
      penalty += viol * viol;
      if (grad) grad->col(arg) -= 2.0 * w * viol * D.col(k);
    }
  }
  m.value = m.length + w * penalty;
  return m;
}

constexpr double kMaxDisplacement = 0.05;

struct RatioEval {
  double ratio = std::numeric_limits<double>::infinity();  ///< L / soft-min offset
  double exact = std::numeric_limits<double>::infinity();  ///< L / min offset
  double length = 0.0;
  double min_offset = 0.0;
};

// L / R_tau with R_tau = -tau log sum_f exp(-b_f / tau), a soft minimum of
// the hull facet offsets. The offset of a facet moves with its vertices
// through the affine weights of the foot point b n.
RatioEval ratio_evaluate(const Mat3X& x, double tau, Mat3X* grad) {
  RatioEval e;
  const Eigen::Index n = x.cols();
  Mat3X gl = Mat3X::Zero(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d d = x.col((i + 1) % n) - x.col(i);
    const double len = d.norm();
    e.length += len;
    if (len > 0.0) {
      gl.col(i) -= d / len;
      gl.col((i + 1) % n) += d / len;
    }
  }
  HullFacets hull;
  try {
    hull = convex_hull_3d(to_polyline(x).vertices());
  } catch (const Error&) {
    return e;
  }
  double bmin = std::numeric_limits<double>::infinity();
  for (const auto& f : hull.facets) bmin = std::min(bmin, f.offset);
  e.min_offset = bmin;
  if (!(bmin > 0.0)) return e;
  std::vector<double> weight(hull.facets.size());
  double z = 0.0;
  for (std::size_t f = 0; f < hull.facets.size(); ++f) {
    weight[f] = std::exp(-(hull.facets[f].offset - bmin) / tau);
    z += weight[f];
  }
  const double soft = bmin - tau * std::log(z);
  e.exact = e.length / bmin;
  if (!(soft > 0.0)) return e;
  e.ratio = e.length / soft;
  if (!grad) return e;

  Mat3X gr = Mat3X::Zero(3, n);
  for (std::size_t f = 0; f < hull.facets.size(); ++f) {
    const double pf = weight[f] / z;
    if (pf < 1e-12) continue;
    const Eigen::Vector3d normal = hull.facets[f].normal;
    const double b = hull.facets[f].offset;
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (normal.dot(x.col(i)) >= b - 1e-9 * std::max(1.0, b)) active.push_back(i);
    }
    Eigen::MatrixXd M(4, static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
      M.block<3, 1>(0, static_cast<Eigen::Index>(k)) = x.col(active[k]);
      M(3, static_cast<Eigen::Index>(k)) = 1.0;
    }
    Eigen::Vector4d rhs;
    rhs << b * normal, 1.0;
    const Eigen::VectorXd lambda = M.completeOrthogonalDecomposition().solve(rhs);
    for (std::size_t k = 0; k < active.size(); ++k) {
      gr.col(active[k]) += pf * lambda[static_cast<Eigen::Index>(k)] * normal;
    }
  }
  *grad = gl / soft - (e.length / (soft * soft)) * gr;
  return e;
}

// Descends L / R_tau with tau shrinking in three phases; returns the curve
// with the best exact ratio, scaled so its smallest facet offset is 1.
Mat3X polish_ratio(Mat3X x, const OptimizerConfig& cfg, int stage, int& iteration,
                   std::vector<TraceRow>& rows) {
  Mat3X best = x;
  double best_exact = ratio_evaluate(x, 1.0, nullptr).exact;
  const double taus[] = {1e-2, 1e-3, 1e-4};
  const int per_phase = std::max(1, cfg.polish_iters / 3);
  for (double tau : taus) {
    Mat3X grad;
    RatioEval cur = ratio_evaluate(x, tau, &grad);
    if (!std::isfinite(cur.ratio)) break;
    double eta = cfg.step;
    int accepted = 0;
    for (int it = 0; it < per_phase; ++it, ++iteration) {
      const double gmax = grad.colwise().norm().maxCoeff();
      if (!(gmax > 0.0)) break;
      const Mat3X trial = x - (eta / gmax) * grad;
      const RatioEval next = ratio_evaluate(trial, tau, nullptr);
      TraceRow row;
      row.iteration = iteration;
      row.stage = stage;
      row.step = eta;
      if (next.ratio < cur.ratio) {
        x = trial;
        ++accepted;
        row.accepted = true;
        if (accepted % cfg.resample_every == 0) {
          x = to_matrix(resample_constant_speed(to_polyline(x), cfg.vertex_count));
          row.resampled = true;
        }
        cur = ratio_evaluate(x, tau, &grad);
        if (!std::isfinite(cur.ratio)) break;
        eta = std::min(1.5 * eta, kMaxDisplacement);
      } else {
        eta *= 0.5;
      }
      if (cur.exact < best_exact) {
        best_exact = cur.exact;
        best = x / cur.min_offset;
      }
      row.length = cur.exact;
      row.merit = cur.ratio;
      row.worst_slack = cur.min_offset - 1.0;
      rows.push_back(row);
      if (eta < 1e-14) break;
    }
  }
  return best;
}

// Appends up to `limit` hull facet normals with offset below 1, smallest
// first, skipping ones already present. Returns whether any were added.
bool append_violated_normals(const Mat3X& x, int limit, std::vector<Point>& dirs) {
  if (limit <= 0) return false;
  const Polyline poly = to_polyline(x);
  std::vector<Point> fresh;
  try {
    HullFacets hull = convex_hull_3d(poly.vertices());
    std::stable_sort(hull.facets.begin(), hull.facets.end(),
                     [](const Facet& a, const Facet& b) { return a.offset < b.offset; });
    for (const auto& f : hull.facets) {
      if (f.offset >= 1.0 || static_cast<int>(fresh.size()) >= limit) break;
      fresh.push_back(f.normal);
    }
  } catch (const DegenerateHull&) {
    fresh.push_back(contains_unit_sphere(poly.vertices(), 256).worst_direction);
  }
  bool added = false;
  for (auto& u : fresh) {
    bool known = false;
    for (const auto& d : dirs) {
      if (d.dot(u) > 1.0 - 1e-10) {
        known = true;
        break;
      }
    }
    if (!known) {
      dirs.push_back(std::move(u));
      added = true;
    }
  }
  return added;
}

Mat3X directions_matrix(const std::vector<Point>& dirs) {
  Mat3X D(3, static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t i = 0; i < dirs.size(); ++i) D.col(static_cast<Eigen::Index>(i)) = dirs[i];
  return D;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (vertex_count < 8) throw InvalidArgument("optimizer needs vertex_count >= 8");
  if (penalty_directions < 1 || max_iters < 1 || resample_every < 1 || refine_directions < 0 ||
      polish_iters < 0) {
    throw InvalidArgument("optimizer counts must be positive");
  }
  if (penalty_weights.empty()) throw InvalidArgument("optimizer needs at least one penalty weight");
  for (std::size_t i = 0; i < penalty_weights.size(); ++i) {
    if (!(penalty_weights[i] > 0.0) || (i > 0 && !(penalty_weights[i] > penalty_weights[i - 1]))) {
      throw InvalidArgument("penalty weights must be positive and strictly increasing");
    }
  }
  if (!(step > 0.0)) throw InvalidArgument("optimizer step must be positive");
  if (!(tol_feasibility >= 0.0)) throw InvalidArgument("tol_feasibility must be >= 0");
}

std::string OptimizerTrace::to_csv() const {
  std::string s = "iteration,stage,weight,length,merit,worst_slack,step,accepted,resampled\n";
  for (const auto& r : rows) {
    s += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.iteration, r.stage, format_number(r.weight),
                     format_number(r.length), format_number(r.merit), format_number(r.worst_slack),
                     format_number(r.step), r.accepted ? 1 : 0, r.resampled ? 1 : 0);
  }
  return s;
}

double feasibility_slack(const Polyline& poly, std::span<const Point> directions) {
  if (directions.empty()) throw InvalidArgument("feasibility_slack needs directions");
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& u : directions) worst = std::min(worst, support(poly.vertices(), u) - 1.0);
  return worst;
}

double exact_slack(const Polyline& poly) {
  if (poly.dim() != 3) throw UnsupportedDimension(poly.dim());
  try {
    const HullFacets hull = convex_hull_3d(poly.vertices());
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& f : hull.facets) worst = std::min(worst, f.offset);
    return worst - 1.0;
  } catch (const DegenerateHull&) {
    return -1.0;
  }
}

OptimizerTrace shorten(const Polyline& init, const OptimizerConfig& cfg) {
  cfg.validate();
  if (init.dim() != 3) throw UnsupportedDimension(init.dim());
  if (!init.closed()) throw InvalidArgument("optimizer needs a closed initial curve");
  auto trace = std::make_shared<OptimizerTrace>();

  Polyline start = resample_constant_speed(init, cfg.vertex_count);
  const double r0 = exact_slack(start) + 1.0;
  if (r0 > 0.0 && r0 < 1.0) {
    trace->inflation = 1.0 / r0;
    std::vector<Point> v = start.vertices();
    for (auto& p : v) p *= trace->inflation;
    start = Polyline(std::move(v), true);
  }
  Mat3X x = to_matrix(start);
  trace->initial_length = closed_length(x);
  const double limit = 10.0 * trace->initial_length;

  std::vector<Point> dirs = fibonacci_sphere(cfg.penalty_directions);
  int iteration = 0;
  for (std::size_t stage = 0; stage < cfg.penalty_weights.size(); ++stage) {
    const double w = cfg.penalty_weights[stage];
    Mat3X D = directions_matrix(dirs);
    Mat3X grad, trial_grad;
    Merit cur = evaluate(x, D, w, &grad);
    // eta is the largest vertex displacement of a step, so the step size does
    // not depend on the penalty scale.
    double eta = cfg.step;
    int accepted = 0;
    double window_gain = 0.0;
    for (int it = 0; it < cfg.max_iters; ++it, ++iteration) {
      const double gmax = grad.colwise().norm().maxCoeff();
      const Mat3X trial = x - (gmax > 0.0 ? eta / gmax : 0.0) * grad;
      const Merit next = evaluate(trial, D, w, nullptr);
      TraceRow row;
      row.iteration = iteration;
      row.stage = static_cast<int>(stage);
      row.weight = w;
      row.step = eta;
      if (next.value < cur.value) {
        window_gain += cur.value - next.value;
        x = trial;
        cur = evaluate(x, D, w, &grad);
        eta = std::min(1.5 * eta, kMaxDisplacement);
        row.accepted = true;
        ++accepted;
        if (accepted % cfg.resample_every == 0) {
          x = to_matrix(resample_constant_speed(to_polyline(x), cfg.vertex_count));
          if (append_violated_normals(x, cfg.refine_directions, dirs)) D = directions_matrix(dirs);
          cur = evaluate(x, D, w, &grad);
          row.resampled = true;
        }
      } else {
        eta *= 0.5;
      }
      row.length = cur.length;
      row.merit = cur.value;
      row.worst_slack = cur.worst_slack;
      trace->rows.push_back(row);
      if (cur.length > limit) {
        trace->final_curve = to_polyline(x);
        throw DivergenceError(fmt::format("optimizer diverged: length {} exceeds 10x initial {}",
                                          cur.length, trace->initial_length),
                              trace);
      }
      if (eta < 1e-14) break;
      // Stall test: accepted steps over the last 500 iterations gained
      // almost nothing.
      if ((it + 1) % 500 == 0) {
        if (window_gain <= 1e-9 * std::max(1.0, cur.value)) break;
        window_gain = 0.0;
      }
    }
    trace->stage_curves.push_back(to_polyline(x));

    append_violated_normals(x, cfg.refine_directions, dirs);
  }

  if (cfg.polish_iters > 0 && exact_slack(to_polyline(x)) > -1.0) {
    x = polish_ratio(x, cfg, static_cast<int>(cfg.penalty_weights.size()), iteration, trace->rows);
  }

  Polyline out = to_polyline(x);
  const double r = exact_slack(out) + 1.0;
  if (r > 0.0) {
    // Slightly above 1/r so rounding cannot leave a negative slack.
    trace->final_scale = (1.0 / r) * (1.0 + 1e-12);
    std::vector<Point> v = out.vertices();
    for (auto& p : v) p *= trace->final_scale;
    out = Polyline(std::move(v), true);
  }
  trace->final_curve = out;
  trace->final_length = length(out);
  trace->final_slack = exact_slack(out);
  return *trace;
}

ChordReport chord_structure_diagnostic(const Polyline& poly) {
  if (poly.dim() != 3) throw UnsupportedDimension(poly.dim());
  const HullFacets hull = convex_hull_3d(poly.vertices());
  const std::size_t n = poly.size();
  std::vector<bool> interior(n);
  for (std::size_t i = 0; i < n; ++i) {
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& f : hull.facets) gap = std::min(gap, f.offset - f.normal.dot(poly.vertex(i)));
    interior[i] = gap > 1e-6;
  }
  ChordReport rep;
  for (bool b : interior) rep.interior_vertices += b ? 1 : 0;
  if (rep.interior_vertices == 0 || rep.interior_vertices == n) return rep;

  // Start scanning just after a boundary vertex so runs never wrap.
  std::size_t origin = 0;
  while (interior[origin]) ++origin;
  const std::size_t limit = poly.closed() ? n : n - origin;
  std::size_t k = 1;
  while (k < limit) {
    const std::size_t i = (origin + k) % n;
    if (!interior[i]) {
      ++k;
      continue;
    }
    InteriorRun run;
    run.first = i;
    run.before = (origin + k - 1) % n;
    while (k < limit && interior[(origin + k) % n]) {
      ++run.count;
      ++k;
    }
    if (k >= limit && !poly.closed()) break;  // open chain ends inside
    run.after = (origin + k) % n;
    const Point& a = poly.vertex(run.before);
    const Point& b = poly.vertex(run.after);
    const Point d = b - a;
    const double dd = d.squaredNorm();
    for (std::size_t j = 0; j < run.count; ++j) {
      const Point& p = poly.vertex((run.first + j) % n);
      const double t = dd > 0.0 ? (p - a).dot(d) / dd : 0.0;
      run.residual = std::max(run.residual, (p - (a + t * d)).norm());
    }
    const double t0 = dd > 0.0 ? std::clamp(-a.dot(d) / dd, 0.0, 1.0) : 0.0;
    run.origin_distance = (a + t0 * d).norm();
    rep.max_residual = std::max(rep.max_residual, run.residual);
    rep.runs.push_back(run);
  }
  return rep;
}

namespace {

// Squared distance from p to the nearest of the sample points (columns).
double nearest_sq(const Mat3X& samples, const Eigen::Vector3d& p) {
  return (samples.colwise() - p).colwise().squaredNorm().minCoeff();
}

double point_segment_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b) {
  const Eigen::Vector3d d = b - a;
  const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

double distance_to_chain(const Mat3X& chain, const Eigen::Vector3d& p) {
  const Eigen::Index n = chain.cols();
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(p, chain.col(i), chain.col((i + 1) % n)));
  }
  return best;
}

Eigen::Matrix3d rotation_about(const Eigen::Vector3d& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

}  // namespace

BaseballFit baseball_distance(const Polyline& poly) {
  if (poly.dim() != 3) throw UnsupportedDimension(poly.dim());
  const Mat3X ball = to_matrix(baseball_curve(500));
  const Mat3X coarse = to_matrix(baseball_curve(100));
  const Mat3X x = to_matrix(poly);

  // Arclength-weighted second moments of the curve.
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  const Eigen::Index n = x.cols();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d a = x.col(i), b = x.col((i + 1) % n);
    const double len = (b - a).norm();
    M += len * (a * a.transpose() + b * b.transpose() + 0.5 * (a * b.transpose() + b * a.transpose())) / 3.0;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(M);
  // The baseball's second moments are (3, 2, 3) pi/... along x, y, z: y is
  // the distinguished axis (smallest eigenvalue).
  const Eigen::Vector3d axis = es.eigenvectors().col(0);

  BaseballFit best;
  best.hausdorff = std::numeric_limits<double>::infinity();
  double best_score = std::numeric_limits<double>::infinity();
  Eigen::Matrix3d best_rot = Eigen::Matrix3d::Identity();
  for (int flip = 0; flip < 2; ++flip) {
    const Eigen::Vector3d target = Eigen::Vector3d::UnitY() * (flip == 0 ? 1.0 : -1.0);
    // Rotation taking the curve axis to +-y.
    const Eigen::Matrix3d align =
        Eigen::Quaterniond::FromTwoVectors(axis, target).toRotationMatrix();
    for (int k = 0; k < 360; ++k) {
      const Eigen::Matrix3d R = rotation_about(Eigen::Vector3d::UnitY(), 2.0 * kPi * k / 360.0) * align;
      const Mat3X y = R * x;
      double score = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) score += nearest_sq(coarse, y.col(i));
      if (score < best_score) {
        best_score = score;
        best_rot = R;
      }
    }
  }
  // Golden-section refinement of the angle about y.
  {
    auto score_at = [&](double ang) {
      const Mat3X y = rotation_about(Eigen::Vector3d::UnitY(), ang) * best_rot * x;
      double s = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) s += nearest_sq(ball, y.col(i));
      return s;
    };
    double lo = -2.0 * kPi / 360.0, hi = 2.0 * kPi / 360.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = score_at(c), fd = score_at(d);
    for (int it = 0; it < 40; ++it) {
      if (fc < fd) {
        hi = d, d = c, fd = fc, c = hi - g * (hi - lo), fc = score_at(c);
      } else {
        lo = c, c = d, fc = fd, d = lo + g * (hi - lo), fd = score_at(d);
      }
    }
    best_rot = rotation_about(Eigen::Vector3d::UnitY(), 0.5 * (lo + hi)) * best_rot;
  }
  const Mat3X y = best_rot * x;
  double h = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) h = std::max(h, distance_to_chain(ball, y.col(i)));
  for (Eigen::Index j = 0; j < ball.cols(); j += 5) h = std::max(h, distance_to_chain(y, ball.col(j)));
  best.hausdorff = h;
  best.rotation = best_rot;
  return best;
}

}  // namespace inspectra
