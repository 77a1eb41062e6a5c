#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "riskrev/asymptotics.hpp"
#include "riskrev/cones.hpp"
#include "riskrev/errors.hpp"
#include "riskrev/exact_risk.hpp"
#include "riskrev/montecarlo.hpp"
#include "sweep.hpp"

namespace riskrev::cli {
namespace {

using nlohmann::json;

const std::string kDiffCurveHeader = "c,sigma,risk_S,risk_L,diff";
const std::string kHeatmapHeader = "c,sigma,diff";
const std::string kEnvelopeHeader = "x,risk_v1,risk_v2,risk_vx,envelope";

// Relative agreement required by --verify for closed-form rows.
constexpr double kVerifyTol = 1e-9;

struct Global {
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t samples = 1'000'000;
  std::uint64_t n_obs = 1;
  std::string out;
  std::string format;
  std::string verify;
  bool emit_plot_script = false;
};

struct Table {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  json footer;  // null when absent
};

struct Output {
  std::string text;
  std::optional<Table> table;
};

json to_json(const Point& p) {
  json a = json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

std::string join_header(const std::vector<std::string>& cols) {
  std::string s;
  for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
  return s;
}

std::string render_csv(const Table& t) {
  std::string s = join_header(t.columns) + "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + format_number(row[i]);
    s += "\n";
  }
  if (!t.footer.is_null()) s += "# " + t.footer.dump() + "\n";
  return s;
}

std::string render_json_table(const Table& t) {
  json j;
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  if (!t.footer.is_null()) j["summary"] = t.footer;
  return j.dump() + "\n";
}

double effective_sigma(double sigma, const Global& g) {
  if (g.n_obs < 1) throw InvalidArgument("--n-obs must be >= 1");
  return sigma / std::sqrt(static_cast<double>(g.n_obs));
}

MCConfig mc_config(const Global& g) {
  MCConfig cfg;
  cfg.n = g.samples;
  cfg.seed = g.seed;
  validate(cfg);
  return cfg;
}

struct PairRisk {
  double segment;
  double triangle;
};

PairRisk example_risks(double c, double sigma) {
  const ExampleGeometry g(c);
  return {risk_segment_exact(g, 0.0, sigma), risk_triangle_exact(g, sigma).total};
}

std::vector<double> envelope_grid(double c, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("--x-step must be positive");
  const double top = 1.0 / c;
  if (top / step > 1e8) throw InvalidArgument("--x-step too small for this c");
  std::vector<double> grid;
  for (std::uint64_t k = 0;; ++k) {
    const double x = static_cast<double>(k) * step;
    if (x > top * (1.0 + 1e-12)) break;
    grid.push_back(std::min(x, top));
  }
  return grid;
}

json envelope_summary(double c, const std::vector<EnvelopePoint>& curve) {
  const std::size_t i = envelope_argmin(curve);
  return json{{"c", c},
              {"argmin_x", curve[i].x},
              {"argmin_envelope", curve[i].envelope},
              {"points", curve.size()}};
}

Table envelope_table(double c, const std::vector<double>& grid) {
  const auto curve = envelope_curve(c, grid);
  Table t{"envelope", {"x", "risk_v1", "risk_v2", "risk_vx", "envelope"}, {}, envelope_summary(c, curve)};
  for (const auto& e : curve) t.rows.push_back({e.x, e.risk_v1, e.risk_v2, e.risk_vx, e.envelope});
  return t;
}

std::string plot_script(const Table& t, const std::string& csv_path) {
  std::string body;
  if (t.kind == "diff-curve") {
    body =
        "for c in sorted(set(r['c'] for r in rows)):\n"
        "    sel = [r for r in rows if r['c'] == c]\n"
        "    plt.plot([r['sigma'] for r in sel], [r['diff'] for r in sel], label=f'c = {c:g}')\n"
        "plt.xscale('log')\n"
        "plt.axhline(0.0, color='grey', lw=0.5)\n"
        "plt.xlabel('sigma')\n"
        "plt.ylabel('risk_S - risk_L')\n"
        "plt.legend()\n";
  } else if (t.kind == "heatmap") {
    body =
        "cs = sorted(set(r['c'] for r in rows))\n"
        "ss = sorted(set(r['sigma'] for r in rows))\n"
        "grid = {(r['c'], r['sigma']): r['diff'] for r in rows}\n"
        "z = [[grid[(c, s)] for c in cs] for s in ss]\n"
        "lim = max(abs(v) for line in z for v in line) or 1.0\n"
        "plt.pcolormesh(cs, ss, z, cmap='RdBu_r', vmin=-lim, vmax=lim, shading='nearest')\n"
        "plt.yscale('log')\n"
        "plt.colorbar(label='risk_S - risk_L')\n"
        "plt.xlabel('c')\n"
        "plt.ylabel('sigma')\n";
  } else {
    body =
        "xs = [r['x'] for r in rows]\n"
        "for key in ('risk_v1', 'risk_v2', 'risk_vx'):\n"
        "    plt.plot(xs, [r[key] for r in rows], lw=1, label=key)\n"
        "plt.plot(xs, [r['envelope'] for r in rows], 'k--', lw=1.5, label='envelope')\n"
        "plt.xlabel('x')\n"
        "plt.legend()\n";
  }
  return "import csv\n"
         "import matplotlib.pyplot as plt\n\n"
         "with open(" + json(csv_path).dump() + ") as fh:\n"
         "    rows = [{k: float(v) for k, v in r.items()}\n"
         "            for r in csv.DictReader(line for line in fh if not line.startswith('#'))]\n\n" +
         body + "plt.savefig(" + json(csv_path + ".png").dump() + ", dpi=150)\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

Output finish_table(Table t, const Global& g) {
  const std::string format = g.format.empty() ? "csv" : g.format;
  Output o;
  o.text = format == "csv" ? render_csv(t) : render_json_table(t);
  o.table = std::move(t);
  return o;
}

Output finish_record(const json& record, const Global& g) {
  if (!g.format.empty() && g.format != "json") {
    throw InvalidArgument("this command only produces JSON records");
  }
  return {record.dump() + "\n", std::nullopt};
}

// ---- verify -------------------------------------------------------------

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open '" + path + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(f, line);) {
    if (!line.empty() && line.back() == '\r') throw InvalidArgument("CRLF line endings are not allowed");
    lines.push_back(line);
  }
  return lines;
}

json verify_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw InvalidArgument("verify: empty file");
  const std::string& header = lines.front();
  std::size_t width = 0;
  if (header == kDiffCurveHeader) {
    width = 5;
  } else if (header == kHeatmapHeader) {
    width = 3;
  } else if (header == kEnvelopeHeader) {
    width = 5;
  } else {
    throw InvalidArgument("verify: unrecognised header '" + header + "'");
  }

  std::vector<std::vector<double>> rows;
  json footer;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.rfind("# ", 0) == 0) {
      footer = json::parse(line.substr(2));
      continue;
    }
    auto row = parse_list(line);
    if (row.size() != width) {
      throw InvalidArgument("verify: line " + std::to_string(i + 1) + " has " +
                            std::to_string(row.size()) + " fields, expected " + std::to_string(width));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("verify: no data rows");

  double c_env = 0.0;
  if (header == kEnvelopeHeader) {
    if (!footer.is_object() || !footer.contains("c")) throw InvalidArgument("verify: envelope footer missing");
    c_env = footer.at("c").get<double>();
  }

  double worst = 0.0;
  std::size_t checked = 0;
  auto compare = [&](double stored, double fresh, std::size_t row) {
    const double rel = std::abs(stored - fresh) / std::max(1.0, std::abs(fresh));
    worst = std::max(worst, rel);
    if (!(rel <= kVerifyTol)) {
      throw InvalidArgument("verify: row " + std::to_string(row + 1) + " disagrees (stored " +
                            format_number(stored) + ", recomputed " + format_number(fresh) + ")");
    }
  };
  // Every 100th row plus the last one.
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r % 100 != 0 && r + 1 != rows.size()) continue;
    const auto& row = rows[r];
    if (header == kDiffCurveHeader) {
      const PairRisk p = example_risks(row[0], row[1]);
      compare(row[2], p.segment, r);
      compare(row[3], p.triangle, r);
      compare(row[4], p.segment - p.triangle, r);
    } else if (header == kHeatmapHeader) {
      const PairRisk p = example_risks(row[0], row[1]);
      compare(row[2], p.segment - p.triangle, r);
    } else {
      const EnvelopePoint e = envelope_point(c_env, row[0]);
      compare(row[1], e.risk_v1, r);
      compare(row[2], e.risk_v2, r);
      compare(row[3], e.risk_vx, r);
      compare(row[4], e.envelope, r);
    }
    ++checked;
  }
  if (header == kEnvelopeHeader) {
    std::vector<EnvelopePoint> curve;
    for (const auto& row : rows) curve.push_back({row[0], row[1], row[2], row[3], row[4]});
    if (curve[envelope_argmin(curve)].x != footer.value("argmin_x", std::nan(""))) {
      throw InvalidArgument("verify: footer argmin does not match the rows");
    }
  }
  return json{{"file", path}, {"rows", rows.size()}, {"checked", checked},
              {"max_rel_error", worst}, {"ok", true}};
}

// ---- geometry selection ---------------------------------------------------

struct Geometry {
  std::string set = "segment";
  double c = std::numeric_limits<double>::quiet_NaN();
  std::string file;
  std::string theta;
};

void add_geometry_options(CLI::App* sub, Geometry& geo) {
  sub->add_option("--set", geo.set, "segment, triangle or polytope-file")
      ->check(CLI::IsMember({"segment", "triangle", "polytope-file"}));
  sub->add_option("--c", geo.c, "slope parameter of the example geometry");
  sub->add_option("--file,--polytope-file", geo.file, "polytope JSON file");
  sub->add_option("--theta", geo.theta, "point as comma-separated coordinates");
}

ExampleGeometry example_of(const Geometry& geo) {
  if (std::isnan(geo.c)) throw InvalidArgument("--c is required for --set " + geo.set);
  return ExampleGeometry(geo.c);
}

ConvexPolytope polytope_of(const Geometry& geo) {
  if (geo.set == "polytope-file") {
    if (geo.file.empty()) throw InvalidArgument("--file is required for --set polytope-file");
    return read_polytope_file(geo.file);
  }
  const ExampleGeometry g = example_of(geo);
  return geo.set == "segment" ? g.segment() : g.triangle();
}

// ---- commands -------------------------------------------------------------

struct RiskArgs {
  Geometry geo;
  double sigma = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> t_star;
  bool mc = false;
};

Output cmd_risk(const RiskArgs& a, const Global& g) {
  if (std::isnan(a.sigma)) throw InvalidArgument("--sigma is required");
  const double sigma_eff = effective_sigma(a.sigma, g);
  json rec{{"set", a.geo.set}, {"sigma", a.sigma}, {"n_obs", g.n_obs},
           {"sigma_effective", sigma_eff}, {"seed", g.seed}};
  const ConvexPolytope poly = polytope_of(a.geo);
  Point theta;
  bool want_mc = a.mc;
  if (a.geo.set == "polytope-file") {
    if (a.t_star) throw InvalidArgument("--t-star applies to the example sets only");
    if (a.geo.theta.empty()) throw InvalidArgument("--theta is required for --set polytope-file");
    theta = parse_point(a.geo.theta);
    want_mc = true;  // no closed form for general polytopes
  } else {
    if (!a.geo.theta.empty()) throw InvalidArgument("use --t-star to place theta on the example segment");
    const ExampleGeometry ex = example_of(a.geo);
    const double t = a.t_star.value_or(0.0);
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("--t-star must lie in [0, 1]");
    theta = t * ex.v2();
    rec["c"] = ex.c();
    rec["t_star"] = t;
    if (a.geo.set == "segment") {
      rec["exact"] = risk_segment_exact(ex, t, sigma_eff);
    } else if (t == 0.0) {
      rec["exact"] = risk_triangle_exact(ex, sigma_eff).total;
    }
  }
  rec["theta_star"] = to_json(theta);
  if (want_mc) {
    const RiskEstimate est = mc_risk_effective(poly, theta, a.sigma, g.n_obs, mc_config(g));
    rec["mc_mean"] = est.mean;
    rec["mc_stderr"] = est.std_error;
    rec["samples"] = est.n;
  }
  return finish_record(rec, g);
}

struct DiffCurveArgs {
  std::string c_list;
  std::string sigma_sweep;
};

Output cmd_diff_curve(const DiffCurveArgs& a, const Global& g) {
  const auto cs = parse_list(a.c_list);
  const auto sigmas = parse_grid(a.sigma_sweep);
  Table t{"diff-curve", {"c", "sigma", "risk_S", "risk_L", "diff"}, {}, json()};
  for (double c : cs) {
    for (double s : sigmas) {
      const double se = effective_sigma(s, g);
      const PairRisk p = example_risks(c, se);
      t.rows.push_back({c, se, p.segment, p.triangle, p.segment - p.triangle});
    }
  }
  return finish_table(std::move(t), g);
}

struct HeatmapArgs {
  std::string c_sweep;
  std::string sigma_sweep;
};

Output cmd_heatmap(const HeatmapArgs& a, const Global& g) {
  const auto cs = parse_grid(a.c_sweep);
  const auto sigmas = parse_grid(a.sigma_sweep);
  Table t{"heatmap", {"c", "sigma", "diff"}, {}, json()};
  for (double c : cs) {
    for (double s : sigmas) {
      const double se = effective_sigma(s, g);
      const PairRisk p = example_risks(c, se);
      t.rows.push_back({c, se, p.segment - p.triangle});
    }
  }
  return finish_table(std::move(t), g);
}

struct EnvelopeArgs {
  double c = std::numeric_limits<double>::quiet_NaN();
  std::string x_sweep;
  double x_step = 1e-4;
};

Output cmd_envelope(const EnvelopeArgs& a, const Global& g) {
  if (std::isnan(a.c)) throw InvalidArgument("--c is required");
  ExampleGeometry check(a.c);
  const auto grid = a.x_sweep.empty() ? envelope_grid(a.c, a.x_step) : parse_grid(a.x_sweep);
  return finish_table(envelope_table(a.c, grid), g);
}

struct StatdimArgs {
  Geometry geo;
  std::string generators;
  bool mc = false;
};

Output cmd_statdim(StatdimArgs a, const Global& g) {
  json rec;
  std::vector<Point> gens;
  bool use_mc = a.mc;
  if (!a.generators.empty()) {
    gens = parse_points(a.generators);
    use_mc = true;
  } else {
    const ConvexPolytope poly = polytope_of(a.geo);
    if (poly.dim() != 2) throw InvalidArgument("tangent cones are computed for planar polytopes only");
    const Point theta = a.geo.theta.empty()
                            ? (a.geo.set == "polytope-file"
                                   ? throw InvalidArgument("--theta is required with a polytope file")
                                   : example_of(a.geo).v1())
                            : parse_point(a.geo.theta);
    const Cone2D cone = tangent_cone_2d(poly, theta);
    rec["cone"] = std::string(to_string(cone.kind));
    rec["theta"] = to_json(theta);
    if (!use_mc) {
      rec["delta"] = statistical_dimension_2d(cone);
      rec["method"] = "analytic";
      return finish_record(rec, g);
    }
    for (const auto& v : cone.generators) gens.push_back(Point(v));
    if (gens.empty()) {
      // The zero cone: every projection vanishes.
      rec["delta"] = 0.0;
      rec["stderr"] = 0.0;
      rec["method"] = "mc";
      rec["samples"] = g.samples;
      rec["seed"] = g.seed;
      return finish_record(rec, g);
    }
  }
  if (g.samples < 2) throw InvalidArgument("--samples must be >= 2");
  const RiskEstimate est = statistical_dimension_mc(gens, g.samples, g.seed);
  rec["delta"] = est.mean;
  rec["stderr"] = est.std_error;
  rec["method"] = "mc";
  rec["samples"] = est.n;
  rec["seed"] = g.seed;
  return finish_record(rec, g);
}

struct ReversalArgs {
  double c = std::numeric_limits<double>::quiet_NaN();
  double x_small = std::numeric_limits<double>::quiet_NaN();
  double x_large = std::numeric_limits<double>::quiet_NaN();
  std::string sigma_sweep;
  int edge_points = 32;
};

Output cmd_reversal(const ReversalArgs& a, const Global& g) {
  if (std::isnan(a.c) || std::isnan(a.x_small) || std::isnan(a.x_large)) {
    throw InvalidArgument("--c, --x-small and --x-large are required");
  }
  if (!(a.x_small > a.x_large)) {
    throw InvalidArgument("sets are not strictly nested: need x-small > x-large");
  }
  if (a.edge_points < 0) throw InvalidArgument("--edge-points must be >= 0");
  std::vector<double> sigmas = parse_grid(a.sigma_sweep);
  for (double& s : sigmas) s = effective_sigma(s, g);
  mc_config(g);
  const ReversalReport rep = detect_finite_sigma_reversal(
      ExampleGeometry(a.c, a.x_small), ExampleGeometry(a.c, a.x_large), sigmas, g.samples, g.seed,
      a.edge_points);
  json rec{{"c", a.c}, {"x_small", a.x_small}, {"x_large", a.x_large}, {"samples", g.samples},
           {"seed", g.seed}, {"edge_points", rep.edge_points}, {"n_obs", g.n_obs}};
  rec["reversal_sigma"] = rep.reversal_sigma ? json(*rep.reversal_sigma) : json(nullptr);
  json sig = json::array(), ss = json::array(), sl = json::array(), es = json::array(),
       el = json::array(), th = json::array(), rev = json::array();
  for (const auto& st : rep.steps) {
    sig.push_back(st.sigma);
    ss.push_back(st.small.value);
    sl.push_back(st.large.value);
    es.push_back(st.small.std_error);
    el.push_back(st.large.std_error);
    th.push_back(st.threshold);
    rev.push_back(st.reversed);
  }
  rec["sigmas"] = sig;
  rec["sup_small"] = ss;
  rec["sup_large"] = sl;
  rec["stderr_small"] = es;
  rec["stderr_large"] = el;
  rec["thresholds"] = th;
  rec["reversed"] = rev;
  return finish_record(rec, g);
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ConvexPolytope read_polytope_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open polytope file '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw InvalidArgument("polytope file '" + path + "': " + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("vertices")) {
    throw InvalidArgument("polytope file needs 'dim' and 'vertices'");
  }
  const auto& jd = j.at("dim");
  if (!jd.is_number_integer() || jd.get<long long>() < 1) {
    throw InvalidArgument("polytope file: 'dim' must be a positive integer");
  }
  const auto dim = jd.get<long long>();
  const auto& jv = j.at("vertices");
  if (!jv.is_array() || jv.empty()) throw InvalidArgument("polytope file: 'vertices' must be a nonempty array");
  std::vector<Point> verts;
  for (const auto& row : jv) {
    if (!row.is_array() || static_cast<long long>(row.size()) != dim) {
      throw InvalidArgument("polytope file: every vertex needs " + std::to_string(dim) + " coordinates");
    }
    Point p(dim);
    for (long long i = 0; i < dim; ++i) {
      if (!row[static_cast<std::size_t>(i)].is_number()) throw InvalidArgument("polytope file: non-numeric coordinate");
      p[i] = row[static_cast<std::size_t>(i)].get<double>();
    }
    verts.push_back(std::move(p));
  }
  return ConvexPolytope(std::move(verts));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Risk of constrained least squares over convex polytopes", "riskrev"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "random seed (default 20240613)");
  app.add_option("--samples", g.samples, "Monte Carlo sample count");
  app.add_option("--n-obs", g.n_obs, "observations per coordinate; noise becomes sigma/sqrt(n)");
  app.add_option("--out", g.out, "write the result to this path instead of stdout");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--verify", g.verify, "recompute a sample of rows of a CSV written by this tool");
  app.add_flag("--emit-plot-script", g.emit_plot_script, "write <out>.plot.py next to the CSV");

  RiskArgs risk;
  auto* s_risk = app.add_subcommand("risk", "exact and/or Monte Carlo risk at one noise level");
  add_geometry_options(s_risk, risk.geo);
  s_risk->add_option("--sigma", risk.sigma, "noise level");
  s_risk->add_option("--t-star", risk.t_star, "theta* = t * v2 on the example segment");
  s_risk->add_flag("--mc", risk.mc, "add a Monte Carlo estimate");

  DiffCurveArgs diff;
  auto* s_diff = app.add_subcommand("diff-curve", "risk_S - risk_L along a noise sweep");
  s_diff->add_option("--c-list", diff.c_list, "comma-separated c values")->required();
  s_diff->add_option("--sigma-sweep", diff.sigma_sweep, "start:stop:points[:log] or a list")->required();

  HeatmapArgs heat;
  auto* s_heat = app.add_subcommand("heatmap", "risk_S - risk_L over a (c, sigma) grid");
  s_heat->add_option("--c-sweep", heat.c_sweep, "c grid")->required();
  s_heat->add_option("--sigma-sweep", heat.sigma_sweep, "sigma grid")->required();

  EnvelopeArgs env;
  auto* s_env = app.add_subcommand("envelope", "limiting vertex risks of Theta_x and their envelope");
  s_env->add_option("--c", env.c, "slope parameter")->required();
  auto* x_sweep = s_env->add_option("--x-sweep", env.x_sweep, "x grid");
  s_env->add_option("--x-step", env.x_step, "grid step from 0 to 1/c (default 1e-4)")->excludes(x_sweep);

  StatdimArgs sd;
  auto* s_sd = app.add_subcommand("statdim", "statistical dimension of a tangent cone");
  add_geometry_options(s_sd, sd.geo);
  sd.geo.set = "polytope-file";
  s_sd->add_option("--generators", sd.generators, "cone generators, e.g. 1,0;0,1");
  s_sd->add_flag("--mc", sd.mc, "estimate by Monte Carlo");

  ReversalArgs rv;
  auto* s_rv = app.add_subcommand("reversal", "search for a finite-noise worst-case reversal");
  s_rv->add_option("--c", rv.c, "slope parameter")->required();
  s_rv->add_option("--x-small", rv.x_small, "x of the smaller set")->required();
  s_rv->add_option("--x-large", rv.x_large, "x of the larger set")->required();
  s_rv->add_option("--sigma-sweep", rv.sigma_sweep, "increasing sigma grid")->required();
  s_rv->add_option("--edge-points", rv.edge_points, "interior candidates per edge");

  for (auto* sub : {s_risk, s_diff, s_heat, s_env, s_sd, s_rv}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Output result;
    if (!g.verify.empty()) {
      if (!app.get_subcommands().empty()) throw InvalidArgument("--verify takes no subcommand");
      result = finish_record(verify_csv(g.verify), g);
    } else if (s_risk->parsed()) {
      result = cmd_risk(risk, g);
    } else if (s_diff->parsed()) {
      result = cmd_diff_curve(diff, g);
    } else if (s_heat->parsed()) {
      result = cmd_heatmap(heat, g);
    } else if (s_env->parsed()) {
      result = cmd_envelope(env, g);
    } else if (s_sd->parsed()) {
      result = cmd_statdim(sd, g);
    } else if (s_rv->parsed()) {
      result = cmd_reversal(rv, g);
    } else {
      err << app.help();
      return kExitUsage;
    }

    if (g.emit_plot_script) {
      if (!result.table) throw InvalidArgument("--emit-plot-script applies to CSV commands");
      if (g.out.empty()) throw InvalidArgument("--emit-plot-script needs --out");
    }
    if (g.out.empty()) {
      out << result.text;
    } else {
      write_file(g.out, result.text);
      if (g.emit_plot_script) write_file(g.out + ".plot.py", plot_script(*result.table, g.out));
    }
    return kExitOk;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace riskrev::cli
