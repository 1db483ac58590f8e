#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "inspectra/error.hpp"
#include "inspectra/generators.hpp"
#include "inspectra/highdim.hpp"
#include "inspectra/horizon.hpp"
#include "inspectra/hull.hpp"
#include "inspectra/optimizer.hpp"
#include "inspectra/parallel.hpp"
#include "inspectra/unfolding.hpp"
#include "manifest.hpp"
#include "svg.hpp"

namespace inspectra::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr double kPi = std::numbers::pi;

// Default for the appendix check L >= C n sqrt(n) r. The closed cross-polytope
// family reaches 2 sqrt(2) n sqrt(n); the lower-bound constant derived from
// the direction constant 3.65 is 1 / (2 sqrt 2 * 3.65).
const double kDefaultAppendixConstant = 1.0 / (2.0 * std::numbers::sqrt2 * kDefaultC);

struct Globals {
  std::string out;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string format = "json";
};

// Tracks inputs and outputs for the run manifest.
class Session {
 public:
  Session(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  std::string read(const std::string& path) {
    std::string text = read_text_file(path);
    manifest.inputs.push_back({path, sha256_hex(text)});
    return text;
  }

  Polyline read_curve(const std::string& path) {
    const std::string text = read(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return polyline_from_csv(text, true);
    return polyline_from_json(text);
  }

  // Empty path writes to stdout.
  void write(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
      out_ << content;
      return;
    }
    write_text_file(path, content);
    manifest.outputs.push_back({path, sha256_hex(content)});
  }

  void finish(double wall) {
    if (manifest.outputs.empty()) return;
    manifest.wall_time_s = wall;
    write_text_file(manifest.outputs.front().path + ".manifest.json", manifest.to_json());
  }

  std::ostream& err() { return err_; }
  RunManifest manifest;

 private:
  std::ostream& out_;
  std::ostream& err_;
};

std::string curve_text(const Polyline& poly, const std::string& format) {
  return format == "csv" ? to_csv(poly) : to_json(poly) + "\n";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json check(const std::string& name, double measured, double bound, double tolerance, bool pass,
           const std::string& relation) {
  return json{{"inequality", name}, {"relation", relation}, {"measured", measured},
              {"bound", bound},     {"tolerance", tolerance}, {"pass", pass}};
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string kind;
  std::size_t per_arc = 500;
  double radius = 1.0;
  int dim = 3;
  std::size_t vertices = 1000;
  int n = 5;
  bool closed = false;
  std::size_t anchors = 24;
  std::size_t subdivide = 1;
};

int cmd_generate(const GenerateArgs& a, const Globals& g, Session& s) {
  Polyline poly = [&] {
    if (a.kind == "baseball") return baseball_curve(a.per_arc);
    if (a.kind == "circle") return circle_curve(a.radius, a.vertices, a.dim);
    if (a.kind == "cross-polytope") return cross_polytope_curve(a.n, a.closed);
    return random_inspection_curve(g.seed, a.anchors, a.subdivide);
  }();
  s.write(g.out, curve_text(poly, g.format));
  return kExitPass;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string curve;
  std::string method = "exact";
  std::int64_t samples = 1000000;
};

int cmd_analyze(const AnalyzeArgs& a, const Globals& g, Session& s) {
  const Polyline poly = s.read_curve(a.curve);
  const HorizonReport h =
      a.method == "mc" ? horizon_mc(poly, a.samples, g.seed) : horizon(poly);
  const double len = length(poly);
  if (g.format == "csv") {
    std::string text = "segment,horizon\n";
    for (std::size_t i = 0; i < h.per_segment.size(); ++i) {
      text += fmt::format("{},{}\n", i, format_number(h.per_segment[i]));
    }
    s.write(g.out, text);
    return kExitPass;
  }
  json j;
  j["total"] = h.total;
  j["per_segment"] = h.per_segment;
  j["efficiency"] = h.total / len;
  j["length"] = len;
  j["method"] = a.method;
  if (h.mc_stderr) {
    j["stderr"] = *h.mc_stderr;
    j["samples"] = a.samples;
    j["seed"] = g.seed;
  }
  s.write(g.out, dump(j));
  return kExitPass;
}

// ------------------------------------------------------------------ unfold

struct UnfoldArgs {
  std::string curve;
  std::string svg;
  std::string report;
  double tol = kGeomTol;
};

int cmd_unfold(const UnfoldArgs& a, const Globals& g, Session& s) {
  const Polyline poly = s.read_curve(a.curve);
  const UnfoldedCurve unf = unfold(poly, a.tol);
  const DecompositionReport rep = spiral_decomposition(unf, a.tol);
  if (!a.svg.empty()) s.write(a.svg, unfolded_svg(unf, &rep));
  const std::string report = decomposition_to_json(rep) + "\n";
  if (!a.report.empty()) s.write(a.report, report);
  if (a.report.empty() && (a.svg.empty() || !g.out.empty())) s.write(g.out, report);
  return kExitPass;
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
  std::string init = "baseball-noisy";
  std::size_t vertices = 200;
  double noise = 0.05;
  int max_iters = 4000;
  int penalty_directions = 2000;
  int polish_iters = 9000;
  std::vector<double> weights{10.0, 100.0, 1000.0};
  std::string trace;
  std::string report;
};

int cmd_optimize(const OptimizeArgs& a, const Globals& g, Session& s) {
  Polyline init = [&] {
    if (a.init == "circle") return circle_curve(1.0, a.vertices, 3);
    if (a.init == "random") return random_inspection_curve(g.seed);
    return noisy_baseball(a.vertices, a.noise, g.seed);
  }();
  OptimizerConfig cfg;
  cfg.vertex_count = a.vertices;
  cfg.max_iters = a.max_iters;
  cfg.penalty_directions = a.penalty_directions;
  cfg.penalty_weights = a.weights;
  cfg.polish_iters = a.polish_iters;
  cfg.seed = g.seed;
  try {
    const OptimizerTrace t = shorten(init, cfg);
    s.write(g.out, curve_text(t.final_curve, g.format));
    if (!a.trace.empty()) s.write(a.trace, t.to_csv());
    const ChordReport chords = chord_structure_diagnostic(t.final_curve);
    const BaseballFit fit = baseball_distance(t.final_curve);
    json j;
    j["init"] = a.init;
    j["vertices"] = t.final_curve.size();
    j["initial_length"] = t.initial_length;
    j["final_length"] = t.final_length;
    j["target_length"] = 4.0 * kPi;
    j["final_slack"] = t.final_slack;
    j["inflation"] = t.inflation;
    j["final_scale"] = t.final_scale;
    j["iterations"] = t.rows.size();
    j["chord_runs"] = chords.runs.size();
    j["chord_interior_vertices"] = chords.interior_vertices;
    j["chord_max_residual"] = chords.max_residual;
    j["baseball_hausdorff"] = fit.hausdorff;
    const std::string summary = dump(j);
    if (!a.report.empty()) {
      s.write(a.report, summary);
    } else if (!g.out.empty()) {
      s.err() << summary;
    }
    return kExitPass;
  } catch (const DivergenceError& e) {
    if (!a.trace.empty()) s.write(a.trace, e.trace().to_csv());
    s.err() << "optimize: " << e.what() << "\n";
    return kExitFail;
  }
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string theorem;
  std::vector<std::string> curves;
  double constant = kDefaultAppendixConstant;
  int directions = 10000;
  double tol = 1e-3;
};

json verify_one(const VerifyArgs& a, const Polyline& poly, bool& pass) {
  json checks = json::array();
  auto add = [&](json c) {
    pass = pass && c["pass"].get<bool>();
    checks.push_back(std::move(c));
  };
  const double len = length(poly);
  if (a.theorem == "main") {
    if (poly.dim() != 3) throw UnsupportedDimension(poly.dim());
    const InradiusResult r = chebyshev_inradius(convex_hull_3d(poly.vertices()));
    const double ratio = len / (4.0 * kPi * r.radius);
    add(check("L >= 4 pi r", len, 4.0 * kPi * r.radius, 1e-9, ratio >= 1.0 - 1e-9, ">="));
    return json{{"length", len}, {"inradius", r.radius}, {"ratio", ratio}, {"checks", checks}};
  }
  if (a.theorem == "horizon-lower") {
    if (poly.dim() != 3) throw UnsupportedDimension(poly.dim());
    const SphereContainment c = contains_unit_sphere(poly.vertices(), a.directions);
    add(check("hull contains S^2", c.min_slack, 0.0, kContainmentTol,
              c.min_slack >= -kContainmentTol, ">="));
    const HorizonReport h = horizon(poly);
    add(check("H >= 8 pi", h.total, 8.0 * kPi, 1e-6, h.total >= 8.0 * kPi - 1e-6, ">="));
    return json{{"length", len}, {"horizon", h.total}, {"checks", checks}};
  }
  if (a.theorem == "spiral") {
    const DecompositionReport rep = spiral_decomposition(unfold(poly));
    const auto pieces = spiral_efficiency_check(rep, a.tol);
    double worst = 0.0;
    std::size_t uncertified = 0, strict_failures = 0;
    for (std::size_t i = 0; i < rep.spirals.size(); ++i) {
      if (!pieces[i].certified) {
        ++uncertified;
        continue;
      }
      worst = std::max(worst, pieces[i].efficiency);
      if (!pieces[i].strict_pass) ++strict_failures;
    }
    add(check("E(spiral) <= 2", worst, 2.0, a.tol, worst <= 2.0 + a.tol, "<="));
    add(check("decomposition identity residual", rep.identity_residual, 0.0, 1e-6,
              rep.identity_residual <= 1e-6, "<="));
    return json{{"length", len},
                {"spirals", rep.spirals.size()},
                {"uncertified_spirals", uncertified},
                {"strict_failures", strict_failures},
                {"checks", checks}};
  }
  // appendix
  const int n = poly.dim();
  const double r = origin_inradius_minimax(poly.vertices()).radius;
  const double nn = static_cast<double>(n);
  const double ratio = len / (nn * std::sqrt(nn) * r);
  add(check("L >= C n sqrt(n) r", ratio, a.constant, 0.0, ratio >= a.constant, ">="));
  return json{{"dim", n}, {"length", len}, {"origin_inradius", r}, {"ratio", ratio},
              {"constant", a.constant}, {"checks", checks}};
}

int cmd_verify(const VerifyArgs& a, const Globals& g, Session& s) {
  json reports = json::array();
  bool pass = true;
  for (const auto& path : a.curves) {
    const Polyline poly = s.read_curve(path);
    bool ok = true;
    json r;
    try {
      r = verify_one(a, poly, ok);
    } catch (const OriginNotInterior& e) {
      ok = false;
      r = json{{"error", e.what()}};
    } catch (const DegenerateHull& e) {
      ok = false;
      r = json{{"error", e.what()}};
    }
    r["input"] = path;
    r["pass"] = ok;
    pass = pass && ok;
    reports.push_back(std::move(r));
  }
  json j;
  j["theorem"] = a.theorem;
  j["reports"] = reports;
  j["pass"] = pass;
  s.write(g.out, dump(j));
  return pass ? kExitPass : kExitFail;
}

// ----------------------------------------------------------------- highdim

struct HighdimArgs {
  std::string mode;
  std::string curve;
  int n = 0;
  std::int64_t samples = 1000000;
  int depth = 6;
  std::size_t slabs = 16;
  double radius = 0.0;
  bool closed = true;
  std::string method = "minimax";
  std::string family = "staircase";
  double constant = kDefaultC;
  std::int64_t budget = 1000000;
};

json estimate_json(const GaussianEstimate& e) {
  return json{{"mean", e.mean}, {"std_error", e.std_error}, {"samples", e.samples}, {"seed", e.seed}};
}

json certificate_json(const DirectionCertificate& c) {
  json j{{"method", c.method == DirectionMethod::minimax ? "minimax" : "slab_rejection"},
         {"u", vec_json(c.u)},
         {"per_curve_max", c.per_curve_max},
         {"bound", c.bound}};
  if (c.theoretical_bound) j["theoretical_bound"] = *c.theoretical_bound;
  if (c.samples_used) j["samples_used"] = c.samples_used;
  return j;
}

int cmd_highdim(const HighdimArgs& a, const Globals& g, Session& s) {
  json j;
  j["mode"] = a.mode;
  bool pass = true;
  const int n = a.n > 0 ? a.n : 4;
  const double rn = std::sqrt(static_cast<double>(n));

  if (a.mode == "cross-polytope") {
    json rows = json::array();
    const int lo = a.n > 0 ? a.n : 2, hi = a.n > 0 ? a.n : 8;
    for (int k = lo; k <= hi; ++k) {
      const CrossPolytopeReport r = cross_polytope_report(k, a.closed);
      const bool ok = std::abs(r.ratio - r.expected_ratio) <= 1e-9 * std::max(1.0, r.expected_ratio);
      pass = pass && ok;
      rows.push_back(json{{"n", k},
                          {"closed", a.closed},
                          {"length", r.length},
                          {"inradius", r.inradius},
                          {"ratio", r.ratio},
                          {"expected_ratio", r.expected_ratio},
                          {"stated_ratio_2n_sqrt_n", r.stated_ratio},
                          {"ratio_over_stated", r.discrepancy},
                          {"matches_expected", ok}});
    }
    j["rows"] = rows;
    j["flag"] = "measured L/r is 2 sqrt(2) n sqrt(n) for the closed curve, a factor sqrt(2) above "
                "the quoted 2n sqrt(n)";
  } else if (a.mode == "split") {
    const Polyline poly = a.curve.empty() ? cross_polytope_curve(2 * n, true) : s.read_curve(a.curve);
    const SplitResult r = split_and_project(poly);
    json pieces = json::array();
    for (std::size_t i = 0; i < r.pieces.size(); ++i) {
      const Polyline& c = r.family.curves[i];
      json verts = json::array();
      for (const auto& v : c.vertices()) verts.push_back(vec_json(v));
      pieces.push_back(json{{"from", r.pieces[i].from},
                            {"to", r.pieces[i].to},
                            {"reversed", r.pieces[i].reversed},
                            {"length", length(c)},
                            {"vertices", verts}});
    }
    j["dim"] = poly.dim();
    j["cuts"] = r.cuts;
    j["midpoints"] = r.midpoints;
    j["collapsed"] = r.collapsed;
    j["pieces"] = pieces;
  } else if (a.mode == "sidak") {
    const SlabFamily f = random_slab_family(n, a.slabs, g.seed);
    const SidakResult r = sidak_check(f, a.samples, g.seed);
    pass = r.pass;
    j["n"] = n;
    j["slabs"] = a.slabs;
    j["lhs"] = estimate_json(r.lhs);
    j["rhs_product"] = r.rhs_product;
  } else if (a.mode == "ball-bound") {
    std::vector<double> radii = a.radius > 0.0 ? std::vector<double>{a.radius}
                                               : std::vector<double>{0.1, 0.5, 1.0, rn / 2.0, rn};
    json rows = json::array();
    for (double r : radii) {
      const BallBoundResult b = gaussian_ball_bound_check(n, r, a.samples, g.seed);
      pass = pass && b.pass;
      rows.push_back(json{{"n", n}, {"r", r}, {"mc", estimate_json(b.mc)}, {"bound", b.bound},
                          {"pass", b.pass}});
    }
    j["rows"] = rows;
  } else if (a.mode == "direction") {
    const CurveFamily fam =
        a.family == "cross" ? cross_polytope_segments(n) : random_staircase_family(n, g.seed, rn);
    DirectionParams p;
    p.seed = g.seed;
    p.depth = a.depth;
    p.budget = a.budget;
    j["n"] = n;
    j["family"] = a.family;
    j["constant"] = a.constant;
    try {
      const DirectionCertificate c = find_direction(
          fam, a.method == "slab" ? DirectionMethod::slab_rejection : DirectionMethod::minimax, p);
      j["certificate"] = certificate_json(c);
      pass = c.method == DirectionMethod::minimax ? c.bound <= a.constant
                                                  : c.bound <= *c.theoretical_bound + 1e-12;
    } catch (const BudgetExhausted& e) {
      j["budget_exhausted"] = json{{"attempts", e.attempts()}, {"in_slabs", e.in_slabs()},
                                   {"message", e.what()}};
      pass = false;
    }
  } else if (a.mode == "tikhomirov") {
    const double scale = a.radius > 0.0 ? a.radius : rn;
    std::vector<Point> pts;
    for (const auto& c : cross_polytope_segments(n).curves) pts.push_back(c.vertex(1) * (scale / rn));
    const TikhomirovReport r = tikhomirov_check(pts, a.constant);
    pass = r.pass;
    j["n"] = n;
    j["points"] = r.points;
    j["hypothesis"] = r.hypothesis;
    j["min_slack"] = r.min_slack;
    j["max_norm"] = r.max_norm;
    j["threshold"] = r.threshold;
    j["cos_rho"] = r.cos_rho;
    j["cos_rho_bound"] = r.cos_rho_bound;
    j["applicable"] = r.applicable;
  } else {  // delta
    const DeltaTable t = delta_table(a.depth);
    json rows = json::array();
    for (const auto& l : t.levels) {
      rows.push_back(json{{"k", l.k}, {"a", l.a}, {"measure", l.measure},
                          {"lower_bound", l.lower_bound}, {"multiplicity", l.multiplicity}});
    }
    j["levels"] = rows;
    j["sqrt_delta_exact"] = t.sqrt_delta_exact;
    j["sqrt_delta_bound"] = t.sqrt_delta_bound;
    j["delta_exact"] = t.delta_exact;
    j["constant_exact"] = t.constant_exact;
    j["constant_from_0.95"] = constant_from_slab_measure(0.95);
  }
  j["pass"] = pass;
  s.write(g.out, dump(j));
  return pass ? kExitPass : kExitFail;
}

// -------------------------------------------------------------------- plot

struct PlotArgs {
  std::string input;
  std::string kind = "auto";
  std::string svg;
};

int cmd_plot(const PlotArgs& a, const Globals& g, Session& s) {
  const std::string text = s.read(a.input);
  std::string kind = a.kind;
  if (kind == "auto") kind = text.rfind("iteration,", 0) == 0 ? "trace" : "curve";
  std::string out;
  if (kind == "trace") {
    out = trace_svg(parse_trace_csv(text));
  } else {
    const bool csv = a.input.size() >= 4 && a.input.substr(a.input.size() - 4) == ".csv";
    const Polyline poly = csv ? polyline_from_csv(text, true) : polyline_from_json(text);
    if (kind == "unfolded") {
      const UnfoldedCurve unf = unfold(poly);
      const DecompositionReport rep = spiral_decomposition(unf);
      out = unfolded_svg(unf, &rep);
    } else {
      out = curve_svg(poly);
    }
  }
  s.write(a.svg.empty() ? g.out : a.svg, out);
  return kExitPass;
}

void record_flags(const CLI::App& app, RunManifest& m) {
  std::map<std::string, std::string> flags;
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "-h" || name == "--version") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : " ") + r;
      if (value.empty()) value = "true";
    } else {
      value = opt->get_default_str();
    }
    flags[name] = value;
  }
  m.flags.insert(m.flags.end(), flags.begin(), flags.end());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"inspectra: inspection curves around the unit sphere"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  Globals g;
  app.add_option("--out", g.out, "Output file (stdout when omitted)");
  app.add_option("--seed", g.seed, "Seed for every randomized step");
  app.add_option("--threads", g.threads, "Worker threads (0 = hardware)");
  app.add_option("--format", g.format, "Curve/report format")->check(CLI::IsMember({"json", "csv"}));

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write a curve file");
  gen->add_option("kind", ga.kind)->required()->check(
      CLI::IsMember({"baseball", "circle", "cross-polytope", "random-inspection"}));
  gen->add_option("--per-arc", ga.per_arc, "Vertices per semicircle (baseball)");
  gen->add_option("--radius", ga.radius, "Circle radius");
  gen->add_option("--dim", ga.dim, "Ambient dimension (circle)");
  gen->add_option("--vertices", ga.vertices, "Vertex count (circle)");
  gen->add_option("--n", ga.n, "Dimension (cross-polytope)");
  gen->add_flag("--closed", ga.closed, "Close the cross-polytope path");
  gen->add_option("--anchors", ga.anchors, "Anchor points (random-inspection)");
  gen->add_option("--subdivide", ga.subdivide, "Pieces per tour edge (random-inspection)");

  AnalyzeArgs aa;
  auto* ana = app.add_subcommand("analyze", "Horizon and efficiency of a curve");
  ana->add_option("curve", aa.curve)->required();
  ana->add_option("--horizon", aa.method)->check(CLI::IsMember({"exact", "mc"}));
  ana->add_option("--samples", aa.samples)->check(CLI::Range(std::int64_t{100}, std::int64_t{1} << 40));

  UnfoldArgs ua;
  auto* unf = app.add_subcommand("unfold", "Planar unfolding and spiral decomposition");
  unf->add_option("curve", ua.curve)->required();
  unf->add_option("--svg", ua.svg, "SVG figure path");
  unf->add_option("--report", ua.report, "JSON decomposition report path");
  unf->add_option("--tol", ua.tol);

  OptimizeArgs oa;
  auto* opt = app.add_subcommand("optimize", "Constrained curve shortening");
  opt->add_option("--init", oa.init)->check(CLI::IsMember({"baseball-noisy", "circle", "random"}));
  opt->add_option("--vertices", oa.vertices);
  opt->add_option("--noise", oa.noise, "Noise sigma for baseball-noisy");
  opt->add_option("--max-iters", oa.max_iters, "Iterations per stage");
  opt->add_option("--penalty-directions", oa.penalty_directions);
  opt->add_option("--polish-iters", oa.polish_iters, "Iterations of the final L/r phase");
  opt->add_option("--weights", oa.weights, "Penalty weight per stage")->delimiter(',');
  opt->add_option("--trace", oa.trace, "Trace CSV path");
  opt->add_option("--report", oa.report, "Summary JSON path");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Check an inequality on curve files");
  ver->add_option("theorem", va.theorem)->required()->check(
      CLI::IsMember({"main", "horizon-lower", "spiral", "appendix"}));
  ver->add_option("curves", va.curves)->required();
  ver->add_option("--constant", va.constant, "C for the appendix check");
  ver->add_option("--directions", va.directions, "Sphere directions for containment");
  ver->add_option("--tol", va.tol, "Spiral efficiency tolerance");

  HighdimArgs ha;
  auto* hd = app.add_subcommand("highdim", "High-dimensional constructions and Gaussian checks");
  hd->add_option("mode", ha.mode)->required()->check(CLI::IsMember(
      {"cross-polytope", "split", "sidak", "ball-bound", "direction", "tikhomirov", "delta"}));
  hd->add_option("curve", ha.curve, "Input curve (split)");
  hd->add_option("--n", ha.n, "Dimension (0 = mode default)");
  hd->add_option("--samples", ha.samples)->check(CLI::Range(std::int64_t{100}, std::int64_t{1} << 40));
  hd->add_option("--depth", ha.depth, "Dyadic depth / delta table depth");
  hd->add_option("--slabs", ha.slabs, "Slab count (sidak)");
  hd->add_option("--radius", ha.radius, "Ball radius or point scale (0 = default)");
  hd->add_option("--closed", ha.closed, "Closed cross-polytope curve");
  hd->add_option("--method", ha.method)->check(CLI::IsMember({"minimax", "slab"}));
  hd->add_option("--family", ha.family)->check(CLI::IsMember({"staircase", "cross"}));
  hd->add_option("--constant", ha.constant, "C for direction/tikhomirov");
  hd->add_option("--budget", ha.budget, "Slab rejection sample budget");

  PlotArgs pa;
  auto* plt = app.add_subcommand("plot", "SVG figure of a curve, unfolding, or trace");
  plt->add_option("input", pa.input)->required();
  plt->add_option("--kind", pa.kind)->check(CLI::IsMember({"auto", "curve", "unfolded", "trace"}));
  plt->add_option("--svg", pa.svg, "SVG path (defaults to --out)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Session s(out, err);
  set_thread_count(g.threads);
  CLI::App* sub = app.get_subcommands().front();
  s.manifest.command = sub->get_name();
  s.manifest.seeds = {g.seed};
  record_flags(app, s.manifest);
  record_flags(*sub, s.manifest);

  int code = kExitUsage;
  try {
    const std::string name = sub->get_name();
    if (name == "generate") code = cmd_generate(ga, g, s);
    else if (name == "analyze") code = cmd_analyze(aa, g, s);
    else if (name == "unfold") code = cmd_unfold(ua, g, s);
    else if (name == "optimize") code = cmd_optimize(oa, g, s);
    else if (name == "verify") code = cmd_verify(va, g, s);
    else if (name == "highdim") code = cmd_highdim(ha, g, s);
    else code = cmd_plot(pa, g, s);
  } catch (const Error& e) {
    err << "inspectra " << sub->get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "inspectra " << sub->get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  }
  s.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return code;
}

}  // namespace inspectra::cli
