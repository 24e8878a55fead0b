#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "incidence_lab/arrangement.hpp"
#include "incidence_lab/incidence.hpp"
#include "incidence_lab/partition.hpp"
#include "incidence_lab/pruner.hpp"
#include "incidence_lab/random.hpp"
#include "incidence_lab/recipes.hpp"
#include "incidence_lab/report_io.hpp"
#include "incidence_lab/structure.hpp"
#include "incidence_lab/sweep.hpp"

using namespace incidence_lab;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNonconforming = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--seed", c.seed, "Experiment seed");
  cmd->add_option("--out", c.out, "Output path (default: stdout)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

void require_json(const Common& c, const std::string& cmd) {
  if (c.format != "json") throw UsageError(cmd + ": only --format json is supported");
}

// A file holding no records at all reads as an empty planar arrangement.
AnyArrangement load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::istringstream probe(text);
  bool any = false;
  for (std::string line; std::getline(probe, line);) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos != std::string::npos && line[pos] != '#') any = true;
  }
  if (!any) return Arrangement2{};
  std::istringstream body(text);
  auto res = read_arrangement(body);
  if (res.duplicates.points_removed || res.duplicates.lines_removed)
    std::cerr << "warning: removed " << res.duplicates.points_removed << " duplicate points and "
              << res.duplicates.lines_removed << " duplicate lines\n";
  return std::move(res.arrangement);
}

Arrangement3 load3(const std::string& path, const std::string& cmd) {
  auto a = load(path);
  if (auto* p = std::get_if<Arrangement3>(&a)) return std::move(*p);
  if (std::get<Arrangement2>(a).m() == 0 && std::get<Arrangement2>(a).n() == 0) return {};
  throw UsageError(cmd + ": " + path + " is not a 3D arrangement");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- generate ------------------------------------------------------------

struct GenerateArgs {
  Common common;
  std::string family = "planar-grid";
  std::int64_t n = 27;
  std::int64_t m = 0;
  int k = 4;
  std::string diagnostics;
};

int run_generate(const GenerateArgs& a) {
  std::ostringstream out;
  std::optional<Json> diag;
  const std::int64_t m = a.m ? a.m : a.n;
  if (a.family == "planar-grid") {
    write_arrangement(gen_planar_grid(a.n), out);
  } else if (a.family == "spatial-grid") {
    write_arrangement(gen_spatial_grid(m, a.n), out);
  } else if (a.family == "no-clique-2d") {
    auto r = build_no_clique_2d(a.n, a.k, a.common.seed);
    write_arrangement(r.arrangement, out);
    diag = to_json(r.diagnostics);
  } else if (a.family == "no-clique-3d") {
    auto r = build_no_clique_3d(m, a.n, a.k, a.common.seed);
    write_arrangement(r.arrangement, out);
    diag = to_json(r.diagnostics);
  } else if (a.family == "random-points") {
    Arrangement3 arr;
    arr.points = random_rational_points(static_cast<std::size_t>(a.n), a.common.seed);
    write_arrangement(arr, out);
  } else {
    throw UsageError("generate: unknown family '" + a.family + "'");
  }
  emit(a.common, out.str());
  if (diag && !a.diagnostics.empty()) {
    std::ofstream f(a.diagnostics);
    f << dump(*diag);
  }
  return kOk;
}

// ---- analyze -------------------------------------------------------------

struct AnalyzeArgs {
  Common common;
  std::string in;
  std::vector<std::string> bounds;
  std::optional<int> r;
};

int run_analyze(const AnalyzeArgs& a) {
  const auto arr = load(a.in);
  const bool spatial = std::holds_alternative<Arrangement3>(arr);
  std::vector<BoundKind> kinds;
  for (const auto& b : a.bounds) kinds.push_back(parse_bound_kind(b));
  if (kinds.empty()) {
    kinds.push_back(BoundKind::szemeredi_trotter);
    if (spatial) kinds.push_back(BoundKind::guth_katz);
    if (spatial && a.r) kinds.push_back(BoundKind::rich);
  }
  BoundParams params;
  params.r = a.r;
  std::vector<BoundReport> reports;
  for (auto kind : kinds)
    reports.push_back(std::visit([&](const auto& x) { return check_bound(x, kind, params); }, arr));
  if (a.common.format == "csv") {
    std::vector<ReportRow> rows;
    for (const auto& r : reports) rows.push_back(report_row(r));
    std::ostringstream out;
    write_csv(rows, out);
    emit(a.common, out.str());
  } else {
    Json j = Json::array();
    for (const auto& r : reports) j.push_back(to_json(r));
    emit(a.common, dump(j));
  }
  return kOk;
}

// ---- cliques / grids -----------------------------------------------------

struct CliqueArgs {
  Common common;
  std::string in;
  int k = 4;
  bool gp = false;
  std::size_t limit = 0;
};

int run_cliques(const CliqueArgs& a) {
  require_json(a.common, "cliques");
  CliqueOptions opts;
  opts.require_gp = a.gp;
  opts.limit = a.limit;
  const auto results =
      std::visit([&](const auto& x) { return find_k_cliques(build_clique_graph(x), a.k, opts); }, load(a.in));
  Json j = Json::array();
  for (const auto& c : results) j.push_back(to_json(c));
  emit(a.common, dump(j));
  return kOk;
}

struct GridArgs {
  Common common;
  std::string in;
  int k = 3;
  std::size_t limit = 0;
};

int run_grids(const GridArgs& a) {
  require_json(a.common, "grids");
  const auto results = std::visit([&](const auto& x) { return find_k_grids(x, a.k, a.limit); }, load(a.in));
  Json j = Json::array();
  for (const auto& g : results) j.push_back(to_json(g));
  emit(a.common, dump(j));
  return kOk;
}

// ---- regulus -------------------------------------------------------------

struct RegulusArgs {
  Common common;
  std::string in;
  std::vector<std::size_t> lines{0, 1, 2};
};

int run_regulus(const RegulusArgs& a) {
  require_json(a.common, "regulus");
  const auto arr = load3(a.in, "regulus");
  if (a.lines.size() != 3) throw UsageError("regulus: --lines takes three indices");
  for (auto i : a.lines)
    if (i >= arr.n()) throw UsageError("regulus: line index " + std::to_string(i) + " out of range");
  const auto basis = regulus_quadric(arr.lines[a.lines[0]], arr.lines[a.lines[1]], arr.lines[a.lines[2]]);
  Json j;
  j["lines"] = a.lines;
  j["nullspace_dimension"] = basis.size();
  Json qs = Json::array();
  for (const auto& q : basis) qs.push_back({{"coefficients", to_json(q)}, {"polynomial", to_json(q.polynomial())}});
  j["quadrics"] = qs;
  if (basis.size() == 1) j["lines_on_quadric"] = lines_on_quadric(arr.lines, basis.front());
  emit(a.common, dump(j));
  return kOk;
}

// ---- partition -----------------------------------------------------------

struct PartitionArgs {
  Common common;
  std::string in;
  std::size_t random = 0;
  int D = 4;
  std::size_t check_lines = 0;
  std::size_t attempts = PartitionOptions{}.attempts_per_round;
};

int run_partition(const PartitionArgs& a) {
  require_json(a.common, "partition");
  std::vector<Point3> pts;
  if (!a.in.empty()) pts = load3(a.in, "partition").points;
  else if (a.random) pts = random_rational_points(a.random, a.common.seed);
  else throw UsageError("partition: give --in or --random");
  PartitionOptions opts;
  opts.attempts_per_round = a.attempts;
  const auto res = partition(pts, a.D, a.common.seed, opts);
  const auto conf = verify_partition(pts, res);
  Json j = to_json(res, conf);
  if (a.check_lines) {
    SplitMix64 rng(hash_mix(a.common.seed, static_cast<std::uint64_t>(Stream::sample)));
    const auto ends = random_rational_points(2 * a.check_lines, rng());
    Json crossings = Json::array();
    int worst = 0;
    for (std::size_t i = 0; i < a.check_lines; ++i) {
      const auto c = line_crossings(res, Line3::through(ends[2 * i], ends[2 * i + 1]));
      worst = std::max(worst, c.root_count);
      crossings.push_back(to_json(c));
    }
    j["crossings"] = crossings;
    j["max_root_count"] = worst;
  }
  emit(a.common, dump(j));
  return conf.conforming ? kOk : kNonconforming;
}

// ---- prune ---------------------------------------------------------------

struct PruneArgs {
  Common common;
  std::vector<std::string> in;
  int random_classes = 0;
  std::size_t class_size = 50;
  bool perturb = false;
};

int run_prune(const PruneArgs& a) {
  require_json(a.common, "prune");
  std::vector<std::vector<Point3>> classes;
  for (const auto& path : a.in) classes.push_back(load3(path, "prune").points);
  for (int i = 0; i < a.random_classes; ++i)
    classes.push_back(random_rational_points(a.class_size, hash_mix(a.common.seed, static_cast<std::uint64_t>(i))));
  if (classes.size() < 4) throw UsageError("prune: needs at least four classes");
  PruneOptions opts;
  if (a.perturb) opts.perturb_seed = a.common.seed;
  PruneResult res;
  try {
    res = prune_all(classes, opts);
  } catch (const MultiConcentration& e) {
    std::cerr << "prune: MULTI_CONCENTRATION: " << e.what() << "\n";
    return kNonconforming;
  }
  Json j;
  Json sizes = Json::array();
  for (std::size_t i = 0; i < classes.size(); ++i)
    sizes.push_back({{"input", classes[i].size()}, {"output", res.classes[i].size()}, {"steps", res.steps_per_class[i]}});
  j["classes"] = sizes;
  bool all = true;
  Json certs = Json::array();
  for (const auto& c : res.certificates) {
    all = all && verify_separation(c, res.classes);
    certs.push_back(to_json(c));
  }
  j["certificates"] = certs;
  j["all_verified"] = all;
  Json pts = Json::array();
  for (const auto& cls : res.classes) {
    Json c = Json::array();
    for (const auto& p : cls) c.push_back({to_string(p(0)), to_string(p(1)), to_string(p(2))});
    pts.push_back(c);
  }
  j["points"] = pts;
  emit(a.common, dump(j));
  return all ? kOk : kNonconforming;
}

// ---- sweep ---------------------------------------------------------------

struct SweepArgs {
  Common common;
  std::string family = "planar-grid";
  std::vector<std::int64_t> sizes;
  int repetitions = 1;
  int k = 4;
  bool coplanar = false;
  std::string plot;
  std::string fit_out;
};

int run_sweep_cmd(const SweepArgs& a) {
  SweepSpec spec;
  spec.family = parse_sweep_family(a.family);
  spec.sizes = a.sizes;
  spec.repetitions = a.repetitions;
  spec.seed = a.common.seed;
  spec.k = a.k;
  spec.coplanar = a.coplanar;
  const auto res = run_sweep(spec);
  const Json fit{{"slope", res.fit.slope},
                 {"intercept", res.fit.intercept},
                 {"residual", res.fit.residual},
                 {"samples", res.fit.samples}};
  if (a.common.format == "csv") {
    std::ostringstream out;
    write_csv(res.rows, out);
    emit(a.common, out.str());
    std::cerr << "fit: slope " << res.fit.slope << " intercept " << res.fit.intercept << " residual "
              << res.fit.residual << "\n";
  } else {
    Json j;
    j["family"] = a.family;
    Json rows = Json::array();
    for (const auto& r : res.rows) rows.push_back(to_json(r));
    j["rows"] = rows;
    j["fit"] = fit;
    emit(a.common, dump(j));
  }
  if (!a.fit_out.empty()) std::ofstream(a.fit_out) << dump(fit);
  if (!a.plot.empty()) {
    std::vector<std::vector<double>> data;
    for (std::size_t i = 0; i < res.rows.size(); ++i)
      data.push_back({static_cast<double>(res.sizes[i]), static_cast<double>(res.rows[i].total),
                      std::exp(res.fit.intercept) * std::pow(static_cast<double>(res.sizes[i]), res.fit.slope)});
    const std::vector<std::string> cols{"size", "incidences", "fit"};
    std::ofstream f(a.plot);
    write_gnuplot(cols, data, f);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-line incidence experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file mirroring the flags; flags win");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write an arrangement file");
  add_common(g, gen.common, "json");
  g->add_option("--family", gen.family, "planar-grid | spatial-grid | no-clique-2d | no-clique-3d | random-points");
  g->add_option("--n", gen.n, "Line count (grids, recipes) or point count (random-points)");
  g->add_option("--m", gen.m, "Point count for spatial families (default: n)");
  g->add_option("--k", gen.k, "Clique size excluded by the recipes");
  g->add_option("--diagnostics", gen.diagnostics, "Recipe diagnostics JSON path");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Incidence counts and bound ratios");
  add_common(a, an.common, "csv");
  a->add_option("--in", an.in, "Arrangement file")->required();
  a->add_option("--bound", an.bounds, "ST | GK | RICH (repeatable)");
  a->add_option("--r", an.r, "Richness threshold for the rich bound");

  CliqueArgs cl;
  auto* c = app.add_subcommand("cliques", "k-cliques of the collinearity graph");
  add_common(c, cl.common, "json");
  c->add_option("--in", cl.in, "Arrangement file")->required();
  c->add_option("--k", cl.k, "Clique size");
  c->add_flag("--gp", cl.gp, "Only cliques in general position");
  c->add_option("--limit", cl.limit, "Stop after this many (0: all)");

  GridArgs gr;
  auto* gc = app.add_subcommand("grids", "k-grids among the lines");
  add_common(gc, gr.common, "json");
  gc->add_option("--in", gr.in, "Arrangement file")->required();
  gc->add_option("--k", gr.k, "Grid size");
  gc->add_option("--limit", gr.limit, "Stop after this many (0: all)");

  RegulusArgs rg;
  auto* r = app.add_subcommand("regulus", "Quadrics through three lines");
  add_common(r, rg.common, "json");
  r->add_option("--in", rg.in, "3D arrangement file")->required();
  r->add_option("--lines", rg.lines, "Three line indices")->expected(3);

  PartitionArgs pa;
  auto* p = app.add_subcommand("partition", "Iterated polynomial bisection");
  add_common(p, pa.common, "json");
  p->add_option("--in", pa.in, "3D arrangement file (points are used)");
  p->add_option("--random", pa.random, "Use this many random rational points instead");
  p->add_option("--D", pa.D, "Partition parameter")->check(CLI::PositiveNumber);
  p->add_option("--check-lines", pa.check_lines, "Count crossings of this many random lines");
  p->add_option("--attempts", pa.attempts, "Restarts at the last admissible degree");

  PruneArgs pr;
  auto* q = app.add_subcommand("prune", "Same-type pruning of point classes");
  add_common(q, pr.common, "json");
  q->add_option("--in", pr.in, "One 3D arrangement file per class (repeatable)");
  q->add_option("--random-classes", pr.random_classes, "Add this many random classes");
  q->add_option("--class-size", pr.class_size, "Points per random class");
  q->add_flag("--perturb", pr.perturb, "Apply an exact random shear before pruning");

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Size sweep with a log-log fit");
  add_common(s, sw.common, "csv");
  s->add_option("--family", sw.family, "planar-grid | spatial-grid | no-clique-2d | no-clique-3d");
  s->add_option("--sizes", sw.sizes, "Sizes (n, or m = n for spatial families)")->delimiter(',')->required();
  s->add_option("--repetitions", sw.repetitions, "Runs per size");
  s->add_option("--k", sw.k, "Clique size for the recipe families");
  s->add_flag("--coplanar", sw.coplanar, "Spatial: also report the largest coplanar family");
  s->add_option("--plot", sw.plot, "gnuplot data path");
  s->add_option("--fit-out", sw.fit_out, "Fit JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*a) return run_analyze(an);
    if (*c) return run_cliques(cl);
    if (*gc) return run_grids(gr);
    if (*r) return run_regulus(rg);
    if (*p) return run_partition(pa);
    if (*q) return run_prune(pr);
    if (*s) return run_sweep_cmd(sw);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonconforming;
  }
  return kUsage;
}
