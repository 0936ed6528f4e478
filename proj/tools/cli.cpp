#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "fiflab/contraction.hpp"
#include "fiflab/data_io.hpp"
#include "fiflab/dimension.hpp"
#include "fiflab/expr.hpp"
#include "fiflab/fif.hpp"
#include "fiflab/ifs.hpp"

namespace fiflab::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kExprHelp =
    "Expressions (for --map-expr / --phi-expr): numbers, the variable y (or t, x),\n"
    "+ - * / ^, parentheses, abs() sqrt() exp() log() min(,) max(,), and\n"
    "  if A <= y <= B then E1 else E2      (also <, >, >=, single comparisons)\n"
    "e.g. --map expr --map-expr \"if 4<=y<=5 then 2*y-8 else 0\"\n";

// Flags shared by build, render and dim.
struct ProblemFlags {
  std::string data_path;
  std::string fixture;
  std::optional<double> alpha;
  std::string alpha_list;
  std::string base = "auto";
  std::string base_file;
  unsigned depth = 10;
  double tol = 1e-10;
  std::string out = "fif";
  bool svg = false;
};

struct Problem {
  std::string name;
  InterpolationData data;
  ScalarFunction g;
  ScalarFunction b;
  ScalingVector alpha;
};

void add_problem_flags(CLI::App& cmd, ProblemFlags& f, bool with_output) {
  auto* data = cmd.add_option("--data", f.data_path, "price CSV with header label,min,max,avg");
  cmd.add_option("--fixture", f.fixture, "built-in dataset (default spinach)")
      ->check(CLI::IsMember({"spinach", "figure1"}))
      ->excludes(data);
  auto* alpha = cmd.add_option("--alpha", f.alpha, "uniform vertical scaling factor (default 0.4)");
  cmd.add_option("--alpha-list", f.alpha_list, "comma-separated scaling factors, one per interval")
      ->excludes(alpha);
  cmd.add_option("--base", f.base,
                 "base function: square (endpoint-fixing y^2 reparameterization), "
                 "paper-square (literal g(y^2)), file; default paper-square for figure1, "
                 "square otherwise")
      ->check(CLI::IsMember({"auto", "square", "paper-square", "file"}));
  cmd.add_option("--base-file", f.base_file, "y,z CSV giving a piecewise-linear base (with --base file)");
  cmd.add_option("--depth", f.depth, "dyadic grid depth (2^depth cells per interval)")
      ->check(CLI::Range(6u, 20u));
  cmd.add_option("--tol", f.tol, "RB iteration tolerance")->check(CLI::PositiveNumber);
  if (with_output) {
    cmd.add_option("--out", f.out, "output path prefix");
    cmd.add_flag("--svg", f.svg, "also write an SVG plot");
  }
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("malformed ") + what + " entry '" + item + "'");
    }
  }
  if (values.empty()) throw UsageError(std::string("empty ") + what);
  return values;
}

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError(std::string(what) + " must look like lo:hi");
  const auto lo = parse_list(text.substr(0, colon), what);
  const auto hi = parse_list(text.substr(colon + 1), what);
  if (lo.size() != 1 || hi.size() != 1 || !(lo[0] < hi[0]))
    throw UsageError(std::string(what) + " must look like lo:hi with lo < hi");
  return {lo[0], hi[0]};
}

ScalarFunction figure1_seed() {
  return ScalarFunction::closed_form({4.0, 10.0}, contraction::example_T_continuous,
                                     "t-continuous", true);
}

Problem load_problem(const ProblemFlags& f) {
  Problem pr{"", figure1_fixture(), figure1_seed(), figure1_seed(), ScalingVector::uniform(0.0, 1)};
  bool figure1 = false;
  if (!f.data_path.empty()) {
    std::ifstream in(f.data_path);
    if (!in) throw Error(ErrorCode::BadHeader, "cannot open data file '" + f.data_path + "'");
    pr.name = fs::path(f.data_path).stem().string();
    pr.data = normalize_series(load_price_csv(in));
    pr.g = linear_interpolant(pr.data);
  } else if (f.fixture == "figure1") {
    figure1 = true;
    pr.name = "figure1";
    pr.g = figure1_seed();
  } else {
    pr.name = "spinach";
    pr.data = normalize_series(spinach_fixture());
    pr.g = linear_interpolant(pr.data);
  }

  const Interval dom = pr.data.partition().domain();
  std::string base = f.base;
  if (base == "auto") base = figure1 ? "paper-square" : "square";
  if (base == "square") {
    pr.b = square_base(pr.g, dom);
  } else if (base == "paper-square") {
    pr.b = literal_square_base(pr.g, dom);
  } else {
    if (f.base_file.empty()) throw UsageError("--base file requires --base-file");
    std::ifstream in(f.base_file);
    if (!in) throw Error(ErrorCode::BadHeader, "cannot open base file '" + f.base_file + "'");
    auto pts = load_points_csv(in);
    std::vector<double> ys, zs;
    for (const auto& p : pts) {
      ys.push_back(p.y);
      zs.push_back(p.z);
    }
    pr.b = ScalarFunction::piecewise_linear(std::move(ys), std::move(zs));
  }

  const std::size_t P = pr.data.partition().intervals();
  std::vector<double> alphas =
      f.alpha_list.empty() ? std::vector<double>(P, f.alpha.value_or(0.4))
                           : parse_list(f.alpha_list, "--alpha-list");
  if (alphas.size() != P)
    throw UsageError("--alpha-list has " + std::to_string(alphas.size()) + " entries; the data have " +
                     std::to_string(P) + " intervals");
  try {
    pr.alpha = ScalingVector::make(std::move(alphas));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return pr;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::SinkWriteFailure, "cannot open '" + path.string() + "' for writing");
  body(out);
}

std::vector<Point> sample_points(const FractalFunction& ff) {
  const auto& s = ff.samples();
  std::vector<Point> pts;
  pts.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) pts.push_back({s.node(i), s.value(i)});
  return pts;
}

SvgStyle plot_style(const std::string& title) {
  SvgStyle style;
  style.width = 800;
  style.height = 500;
  style.margin = 40;
  style.title = title;
  return style;
}

void write_fif_svg(const fs::path& path, const FractalFunction& ff, const Problem& pr,
                   const std::string& title) {
  std::vector<SvgSeries> series;
  series.push_back({sample_points(ff), "g^alpha", "#1f77b4", false});
  SvgSeries knots{{pr.data.points().begin(), pr.data.points().end()}, "data", "#d62728", true};
  series.push_back(std::move(knots));
  write_file(path, [&](std::ostream& o) { export_svg(series, plot_style(title), o); });
}

Json alpha_json(const ScalingVector& a) {
  return std::vector<double>(a.values().begin(), a.values().end());
}

// ---------------------------------------------------------------------------
// check

struct CheckFlags {
  std::string map = "t-continuous";
  std::string map_expr;
  std::string phi = "half";
  std::string phi_expr;
  std::string mode = "suzuki";
  std::optional<std::string> domain;
  double delta = 0.01;
  double ratio = 0.99;
  double tol = 1e-9;
  std::string carrier = "extended";
  long long carrier_max = 99;
  std::size_t max_pairs = 4'000'000;
  std::size_t max_witnesses = 0;
};

int cmd_check(const CheckFlags& f, std::ostream& out) {
  using namespace contraction;
  std::optional<MetricSelfMap> map;
  if (f.map == "t-discrete") {
    auto carrier = f.carrier == "odd" ? discrete_carrier_odd(f.carrier_max)
                                        : discrete_carrier_extended(f.carrier_max);
    map = t_discrete_map(std::move(carrier));
  } else {
    const auto [lo, hi] = parse_range(f.domain.value_or("0:12"), "--domain");
    if (f.map == "t-continuous") {
      map = t_continuous_map({lo, hi});
    } else {
      if (f.map_expr.empty()) throw UsageError("--map expr requires --map-expr");
      const auto e = expr::Expression::parse(f.map_expr);
      map = MetricSelfMap::on_interval({lo, hi}, e, "expr: " + f.map_expr);
    }
  }

  std::optional<ContractionModulus> phi;
  if (f.mode != "banach") {
    if (f.phi == "half") {
      phi = ContractionModulus::half();
    } else if (f.phi == "piecewise") {
      phi = ContractionModulus::piecewise();
    } else {
      if (f.phi_expr.empty()) throw UsageError("--phi expr requires --phi-expr");
      try {
        phi = ContractionModulus(expr::Expression::parse(f.phi_expr), "expr: " + f.phi_expr);
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    }
  }

  const GridSpec grid{f.delta, f.max_pairs};
  CheckReport report;
  if (f.mode == "banach") report = check_banach(*map, grid, f.ratio, f.tol);
  else if (f.mode == "phi") report = check_phi(*map, *phi, grid, f.tol);
  else report = check_suzuki(*map, *phi, grid, f.tol);

  Json j = to_json(report);
  j["map"] = map->name();
  if (phi) j["phi"] = phi->name();
  if (f.max_witnesses > 0 && j["witnesses"].size() > f.max_witnesses) {
    Json trimmed = Json::array();
    for (std::size_t i = 0; i < f.max_witnesses; ++i) trimmed.push_back(j["witnesses"][i]);
    j["witnesses"] = std::move(trimmed);
    j["witnesses_truncated"] = true;
  }
  export_report_json(j, out);
  return report.clean() ? kExitOk : kExitCounterexamples;
}

// ---------------------------------------------------------------------------
// build

int cmd_build(const ProblemFlags& f, std::ostream& out) {
  const Problem pr = load_problem(f);
  FifOptions opt;
  opt.depth = f.depth;
  opt.tol = f.tol;
  const FractalFunction ff = construct_alpha_fif(pr.data, pr.g, pr.b, pr.alpha, opt);

  const fs::path csv = f.out + ".samples.csv";
  const fs::path meta = f.out + ".meta.json";
  write_file(csv, [&](std::ostream& o) { export_samples_csv(ff, o); });
  Json j;
  j["dataset"] = pr.name;
  j["seed"] = pr.g.description();
  j["base"] = pr.b.description();
  const Json info = fif_metadata(ff);
  for (const auto& [k, v] : info.items()) j[k] = v;
  write_file(meta, [&](std::ostream& o) { export_report_json(j, o); });

  Json files = {csv.string(), meta.string()};
  if (f.svg) {
    const fs::path svg = f.out + ".svg";
    write_fif_svg(svg, ff, pr, pr.name + " alpha-FIF");
    files.push_back(svg.string());
  }
  j["files"] = files;
  export_report_json(j, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// render

struct RenderFlags {
  std::string method = "chaos";
  long long points = 100000;
  std::uint64_t seed = 42;
  std::size_t burn_in = 100;
  std::size_t iterations = 10;
  std::size_t cap = 0;
};

int cmd_render(const ProblemFlags& f, const RenderFlags& r, std::ostream& out) {
  if (r.points < 1) throw UsageError("--points must be at least 1");
  const Problem pr = load_problem(f);
  const IfsSystem ifs = build_ifs(pr.data, pr.alpha, pr.g, pr.b);
  const auto n = static_cast<std::size_t>(r.points);
  const PointCloud cloud =
      r.method == "chaos"
          ? chaos_game(ifs, n, r.burn_in, r.seed)
          : deterministic_attractor(ifs, data_cloud(pr.data), r.iterations, r.cap > 0 ? r.cap : n);

  const fs::path csv = f.out + ".cloud.csv";
  write_file(csv, [&](std::ostream& o) { export_cloud_csv(cloud, o); });
  const BoundingBox box = cloud.bounds();
  Json j;
  j["dataset"] = pr.name;
  j["method"] = r.method;
  j["alpha"] = alpha_json(pr.alpha);
  if (r.method == "chaos") {
    j["seed"] = r.seed;
    j["burn_in"] = r.burn_in;
  } else {
    j["iterations"] = r.iterations;
    j["cap"] = r.cap > 0 ? r.cap : n;
  }
  j["points"] = cloud.size();
  j["bounds"] = {{"y_lo", box.y_lo}, {"y_hi", box.y_hi}, {"z_lo", box.z_lo}, {"z_hi", box.z_hi}};
  Json files = {csv.string()};
  if (f.svg) {
    const fs::path svg = f.out + ".svg";
    std::vector<SvgSeries> series;
    series.push_back({{cloud.points().begin(), cloud.points().end()}, "attractor", "#1f77b4", true});
    write_file(svg, [&](std::ostream& o) {
      export_svg(series, plot_style(pr.name + " attractor (" + r.method + ")"), o);
    });
    files.push_back(svg.string());
  }
  j["files"] = files;
  export_report_json(j, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// dim

struct DimFlags {
  bool empirical = false;
  std::string k_range = "3:9";
  long long points = 1'000'000;
  std::uint64_t seed = 42;
};

int cmd_dim(const ProblemFlags& f, const DimFlags& d, std::ostream& out) {
  const auto [klo, khi] = parse_range(d.k_range, "--k-range");
  if (klo != std::floor(klo) || khi != std::floor(khi) || klo < 0 || khi - klo < 3 || khi > 30)
    throw UsageError("--k-range needs integers lo:hi with hi - lo >= 3");
  if (d.points < 1) throw UsageError("--points must be at least 1");
  const Problem pr = load_problem(f);

  Json j;
  j["dataset"] = pr.name;
  j["alpha"] = alpha_json(pr.alpha);
  j["analytic"] = to_json(fif_box_dimension(pr.data, pr.alpha));
  if (d.empirical) {
    const IfsSystem ifs = build_ifs(pr.data, pr.alpha, pr.g, pr.b);
    const PointCloud cloud = chaos_game(ifs, static_cast<std::size_t>(d.points), 100, d.seed);
    Json e = to_json(estimate_box_dimension(cloud, static_cast<int>(klo), static_cast<int>(khi)));
    e["points"] = cloud.size();
    e["seed"] = d.seed;
    j["empirical"] = std::move(e);
  }
  export_report_json(j, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// casestudy

struct CaseSpec {
  std::string name;
  std::vector<double> alpha;
  std::optional<double> closed_form;  // 1 + log10(sum alpha) for equal intervals
  std::optional<double> printed;      // two-decimal value reported for the case
};

int cmd_casestudy(const std::string& dir, unsigned depth, double tol, std::ostream& out) {
  const std::vector<CaseSpec> cases = {
      {"alpha_0.4", std::vector<double>(10, 0.4), 1.0 + std::log10(4.0), 1.60},
      {"alpha_0.6", std::vector<double>(10, 0.6), 1.0 + std::log10(6.0), 1.77},
      {"alpha_mixed", {0.1, 0.2, 0.5, 0.2, 0.4, 0.2, 0.4, 0.2, 0.3, 0.1}, 1.0 + std::log10(2.6), 1.41},
      {"alpha_0.0", std::vector<double>(10, 0.0), std::nullopt, std::nullopt},
  };

  ProblemFlags pf;
  pf.fixture = "spinach";
  pf.depth = depth;
  pf.tol = tol;
  const Problem base = load_problem(pf);

  Json summary;
  summary["dataset"] = "spinach";
  summary["knots"] = base.data.abscissae();
  summary["prices"] = base.data.ordinates();
  summary["depth"] = depth;
  summary["tolerance"] = tol;
  Json entries = Json::array();
  Json dims = Json::array();
  bool all_ok = true;

  for (const auto& c : cases) {
    const ScalingVector alpha = ScalingVector::make(c.alpha);
    FifOptions opt;
    opt.depth = depth;
    opt.tol = tol;
    const FractalFunction ff = construct_alpha_fif(base.data, base.g, base.b, alpha, opt);
    const DimensionResult dim = fif_box_dimension(base.data, alpha);

    double knot_error = 0.0;
    for (std::size_t k = 0; k < base.data.size(); ++k)
      knot_error = std::max(knot_error, std::abs(ff.samples().value(ff.samples().knot_node(k)) -
                                                 base.data[k].z));

    Json e;
    e["name"] = c.name;
    e["alpha"] = c.alpha;
    e["classical"] = alpha.is_zero();
    e["dimension"] = to_json(dim);
    e["knot_error"] = knot_error;
    const Json info = fif_metadata(ff);
    for (const auto& [k, v] : info.items())
      if (k != "alpha") e[k] = v;
    if (c.closed_form) {
      const bool near = std::abs(dim.value - *c.closed_form) <= 1e-3;
      const bool printed = std::abs(std::trunc(dim.value * 100.0) / 100.0 - *c.printed) < 1e-9;
      e["closed_form"] = *c.closed_form;
      e["reported"] = *c.printed;
      e["matches"] = near && printed;
      all_ok = all_ok && near && printed;
      dims.push_back(dim.value);
    }
    entries.push_back(std::move(e));

    const fs::path prefix = fs::path(dir) / ("fif_" + c.name);
    write_file(prefix.string() + ".samples.csv", [&](std::ostream& o) { export_samples_csv(ff, o); });
    write_fif_svg(prefix.string() + ".svg", ff, base,
                  alpha.is_zero() ? "spinach classical interpolant (alpha = 0)"
                                  : "spinach alpha-FIF, " + c.name);
  }
  summary["cases"] = std::move(entries);
  summary["dims"] = std::move(dims);
  summary["passed"] = all_ok;
  write_file(fs::path(dir) / "summary.json", [&](std::ostream& o) { export_report_json(summary, o); });
  export_report_json(summary, out);
  return all_ok ? kExitOk : kExitReproductionFailed;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NoConvergence:
    case ErrorCode::SinkWriteFailure:
      return 1;
    case ErrorCode::ParseError:
    case ErrorCode::InvalidScaling:
    case ErrorCode::InvalidModulus:
    case ErrorCode::EmptySample:
    case ErrorCode::DegenerateRange:
      return kExitUsage;
    default:
      return kExitDataInvalid;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"fiflab: alpha-fractal interpolation functions, contraction checks and box dimension"};
  app.require_subcommand(1, 1);
  app.footer(kExprHelp);

  CheckFlags check_flags;
  auto* check = app.add_subcommand("check", "scan a map for contraction-condition violations");
  check->add_option("--map", check_flags.map, "t-continuous | t-discrete | expr")
      ->check(CLI::IsMember({"t-continuous", "t-discrete", "expr"}));
  check->add_option("--map-expr", check_flags.map_expr, "map expression (with --map expr)");
  check->add_option("--phi", check_flags.phi, "half | piecewise | expr")
      ->check(CLI::IsMember({"half", "piecewise", "expr"}));
  check->add_option("--phi-expr", check_flags.phi_expr, "modulus expression (with --phi expr)");
  check->add_option("--mode", check_flags.mode, "banach | phi | suzuki")
      ->check(CLI::IsMember({"banach", "phi", "suzuki"}));
  check->add_option("--domain", check_flags.domain, "interval carrier lo:hi (default 0:12)");
  check->add_option("--delta", check_flags.delta, "grid spacing")->check(CLI::PositiveNumber);
  check->add_option("--ratio", check_flags.ratio, "Banach ratio bound")->check(CLI::Range(0.0, 1.0));
  check->add_option("--tol", check_flags.tol, "absolute tolerance")->check(CLI::NonNegativeNumber);
  check->add_option("--carrier", check_flags.carrier, "t-discrete carrier: extended {0..N} | odd {0,2} plus odd numbers")
      ->check(CLI::IsMember({"extended", "odd"}));
  check->add_option("--carrier-max", check_flags.carrier_max, "largest carrier point N")
      ->check(CLI::Range(4LL, 100000LL));
  check->add_option("--max-pairs", check_flags.max_pairs, "pair budget; delta coarsens above it")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40));
  check->add_option("--max-witnesses", check_flags.max_witnesses, "print at most N witnesses (0 = all)");

  ProblemFlags build_flags;
  auto* build = app.add_subcommand("build", "construct an alpha-FIF and write samples + metadata");
  add_problem_flags(*build, build_flags, true);

  ProblemFlags render_flags;
  RenderFlags render_opts;
  auto* render = app.add_subcommand("render", "render the IFS attractor as a point cloud");
  add_problem_flags(*render, render_flags, true);
  render->add_option("--method", render_opts.method, "chaos | deterministic")
      ->check(CLI::IsMember({"chaos", "deterministic"}));
  render->add_option("--points", render_opts.points, "chaos-game points / deterministic cap");
  render->add_option("--seed", render_opts.seed, "RNG seed");
  render->add_option("--burn-in", render_opts.burn_in, "discarded chaos-game steps");
  render->add_option("--iterations", render_opts.iterations, "deterministic Hutchinson steps")
      ->check(CLI::Range(std::size_t{1}, std::size_t{64}));
  render->add_option("--cap", render_opts.cap, "deterministic cloud cap (default --points)");

  ProblemFlags dim_flags;
  DimFlags dim_opts;
  auto* dim = app.add_subcommand("dim", "analytic (and optionally box-counting) dimension");
  add_problem_flags(*dim, dim_flags, false);
  dim->add_flag("--empirical", dim_opts.empirical, "add a chaos-game box-counting estimate");
  dim->add_option("--k-range", dim_opts.k_range, "box sizes 2^-k for k in lo:hi");
  dim->add_option("--points", dim_opts.points, "chaos-game points for --empirical");
  dim->add_option("--seed", dim_opts.seed, "RNG seed for --empirical");

  std::string case_dir;
  unsigned case_depth = 10;
  double case_tol = 1e-10;
  auto* casestudy = app.add_subcommand("casestudy", "reproduce the spinach price case study");
  casestudy->add_option("--out", case_dir, "output directory")->required();
  casestudy->add_option("--depth", case_depth, "dyadic grid depth")->check(CLI::Range(6u, 20u));
  casestudy->add_option("--tol", case_tol, "RB iteration tolerance")->check(CLI::PositiveNumber);

  std::vector<std::string> argv_store{"fiflab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  std::ostringstream buffer;
  int code = kExitOk;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (*check) code = cmd_check(check_flags, buffer);
    else if (*build) code = cmd_build(build_flags, buffer);
    else if (*render) code = cmd_render(render_flags, render_opts, buffer);
    else if (*dim) code = cmd_dim(dim_flags, dim_opts, buffer);
    else code = cmd_casestudy(case_dir, case_depth, case_tol, buffer);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  out << buffer.str();
  return code;
}

}  // namespace fiflab::cli
