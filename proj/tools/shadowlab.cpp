// shadowlab: construct, check, measure and draw iterated function systems.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "shadowlab/constructions.hpp"
#include "shadowlab/dimension.hpp"
#include "shadowlab/io.hpp"
#include "shadowlab/svg.hpp"

using namespace shadowlab;

namespace {

constexpr int kExitThick = 0;
constexpr int kExitNotThick = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitUsage = 64;
constexpr int kExitBudget = 65;

Json error_json(const Error& e) { return {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}; }

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
      return kExitUsage;
    case ErrorKind::BudgetExceeded:
      return kExitBudget;
    default:
      return kExitInconclusive;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  out << text;
}

std::vector<Rational> rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

// "x,y;x,y;..." as columns.
Matrix<Rational> point_list(const std::string& text) {
  std::vector<std::vector<Rational>> pts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) pts.push_back(rational_list(item));
  if (pts.empty()) throw Error(ErrorKind::Parse, "empty point list");
  Matrix<Rational> m(static_cast<Eigen::Index>(pts.front().size()), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (pts[j].size() != pts.front().size()) throw Error(ErrorKind::Parse, "points of different lengths");
    for (std::size_t i = 0; i < pts[j].size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pts[j][i];
  }
  return m;
}

Json rational_json(const Rational& r) { return format_rational(r); }

// Reads a spec, or the spec embedded in a check report.
struct Loaded {
  Spec spec;
  std::string bytes;
  Json doc;
};

Loaded load(const std::string& path) {
  Loaded l;
  l.bytes = read_file(path);
  try {
    l.doc = Json::parse(l.bytes);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
  try {
    l.spec = spec_from_json(l.doc.contains("input") ? l.doc.at("input") : l.doc);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed spec: ") + e.what());
  } catch (const Error& e) {
    // Invalid maps or seeds make the file unusable as input.
    throw Error(ErrorKind::Parse, std::string(to_string(e.kind())) + ": " + e.what());
  }
  return l;
}

// ---------------------------------------------------------------------------
// construct

struct ConstructArgs {
  std::string family;
  std::string t = "1/4", s = "7/10", r = "1/3";
  int n = 9, d = 2;
  std::string lambda = "1/5", inner = "3/10", shift;
  std::optional<int> depth;
  std::string vertices;
  std::string ratio = "1/8";
  int levels = 6, cascade_depth = 12;
  std::string output;
};

Spec construct(const ConstructArgs& a) {
  const std::string& f = a.family;
  if (f == "mendivil-taylor") {
    const Rational t = parse_rational(a.t), s = parse_rational(a.s);
    auto mt = mendivil_taylor(t, s);
    return make_ifs_spec(mt.ifs, {{"family", f},
                                  {"t", rational_json(t)},
                                  {"s", rational_json(s)},
                                  {"predicted_thick", mt.predicted_thick},
                                  {"threshold_t", mendivil_taylor_threshold(to_double(s))}});
  }
  if (f == "rotated-square") {
    const Rational r = parse_rational(a.r);
    auto rs = rotated_square(r);
    return make_ifs_spec(rs.ifs, {{"family", f},
                                  {"r", rational_json(r)},
                                  {"predicted_thick", rs.predicted_thick},
                                  {"predicted_disconnected", rs.predicted_disconnected}});
  }
  if (f == "cross-corner") {
    auto cc = cross_corner(a.n, a.d);
    return make_ifs_spec(cc.ifs, {{"family", f},
                                  {"n", cc.n},
                                  {"d", cc.d},
                                  {"corner_count", cc.corner_count},
                                  {"formula_floor", cc.formula_floor},
                                  {"formula_ceil", cc.formula_ceil},
                                  {"formula_agrees", cc.formula_floor == cc.corner_count},
                                  {"digit_count", cc.digits.size()},
                                  {"cross_cells", cc.cross_cells},
                                  {"contact", vector_json(cc.contact)},
                                  {"dimension", cc.dimension},
                                  {"predicted_thick", true}});
  }
  if (f == "simplex") {
    SimplexParams p = standard_simplex_params(a.d, parse_rational(a.lambda));
    if (!a.vertices.empty()) p.vertices = point_list(a.vertices);
    p.r = parse_rational(a.inner);
    if (!a.shift.empty()) {
      const auto t = rational_list(a.shift);
      p.t = Vector<Rational>(static_cast<Eigen::Index>(t.size()));
      for (std::size_t i = 0; i < t.size(); ++i) p.t(static_cast<Eigen::Index>(i)) = t[i];
    }
    auto ifs = simplex_ifs(p);
    return make_ifs_spec(ifs, {{"family", f},
                               {"lambda", rational_json(p.lambda)},
                               {"inner_ratio", rational_json(p.r)},
                               {"inner_shift", vector_json(p.t)},
                               {"contraction_level", ifs.contraction_level},
                               {"predicted_thick", true}});
  }
  if (f == "triangle-grid") {
    const Matrix<Rational> tri = a.vertices.empty() ? point_list("0,0;1,0;0,1") : point_list(a.vertices);
    const Rational lambda = parse_rational(a.lambda);
    auto tg = triangle_grid_ifs(tri, lambda, a.depth, parse_rational(a.inner));
    return make_ifs_spec(tg.ifs,
                         {{"family", f},
                          {"lambda", rational_json(lambda)},
                          {"depth", tg.depth},
                          {"map_count", tg.map_count},
                          {"dimension_estimate", tg.dimension_estimate},
                          {"predicted_thick", true}},
                         false);
  }
  if (f == "polytope-union") {
    const Matrix<Rational> v = a.vertices.empty() ? point_list("0,0;1,0;1,1;0,1") : point_list(a.vertices);
    const Rational lambda = parse_rational(a.lambda);
    auto pu = polytope_union(v, lambda);
    return make_union_spec(pu.members, ConvexPointSet<Rational>(reduce_generators(v)),
                           {{"family", f},
                            {"lambda", rational_json(lambda)},
                            {"simplices", pu.simplices.size()},
                            {"predicted_thick", true}});
  }
  if (f == "venetian-blind") {
    const Rational ratio = parse_rational(a.ratio);
    auto vb = venetian_blind(geometric_epsilons(ratio, a.n), a.n, 1000);
    std::vector<Segment<Rational>> segs = vb.E.back();
    segs.insert(segs.end(), vb.connectors.begin(), vb.connectors.end());
    Matrix<Rational> seed(2, 2);
    seed << 0, 1, 0, 0;
    return make_segments_spec<Rational>(std::move(segs), {}, ConvexPointSet<Rational>(seed),
                                        {{"family", f},
                                         {"n", a.n},
                                         {"epsilon_ratio", rational_json(ratio)},
                                         {"blinds", vb.E.back().size()},
                                         {"connectors", vb.connectors.size()},
                                         {"S", rational_json(vb.S)},
                                         {"blind_squared_length", rational_json(vb.blind_squared_length)},
                                         {"length", vb.length_sum},
                                         {"length_closed_form", vb.length_closed},
                                         {"max_gap_quarter_turn", vb.coverage.max_gap},
                                         {"max_gap_reflected", vb.reflected_coverage.max_gap}});
  }
  if (f == "polygon-blind") {
    const Matrixd poly = cast_matrix<double>(a.vertices.empty() ? point_list("0,0;1,0;1,1;0,1") : point_list(a.vertices));
    PolygonBlindOptions opt;
    opt.blind_levels = a.levels;
    opt.depth = a.cascade_depth;
    const Rational ratio = parse_rational(a.ratio);
    auto pb = polygon_blind(poly, geometric_epsilons(ratio, a.levels), opt);
    return make_segments_spec<double>(pb.segments, pb.points, ConvexPointSet<double>(poly),
                                      {{"family", f},
                                       {"epsilon_ratio", rational_json(ratio)},
                                       {"blinds", pb.blinds},
                                       {"cascades", pb.cascades},
                                       {"tail_bound", pb.tail_bound},
                                       {"max_gap", pb.coverage.max_gap}});
  }
  throw Error(ErrorKind::Parse, "unknown family '" + f + "'");
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  std::string input;
  bool exact = false;
  bool no_fallback = false;
  int level = 3;
  std::size_t directions = 180;
  int max_level = 3;
  std::string output;
};

template <class T>
int check_systems(const Spec& spec, const SpecData<T>& d, const CheckArgs& a, Json& report) {
  CheckOptions opt;
  opt.exact = a.exact;
  opt.exact_fallback = !a.no_fallback;

  Json members = Json::array();
  bool all_thick = true;
  bool unresolved = false;
  std::vector<ConvexPointSet<double>> merged;
  for (const auto& ifs : d.systems) {
    Json m = Json::object();
    auto rep = thick_shadow_check(ifs, opt);
    m["shadow"] = shadow_json(rep);
    if (!rep.thick) {
      all_thick = false;
      m["witness"] = hyperplane_json(line_witness(ifs, rep));
    } else {
      m["witness"] = nullptr;
    }
    if (rep.marginal_tests > 0) unresolved = true;
    m["disconnect"] = disconnect_json(disconnectedness_check(ifs, a.max_level, opt));
    m["vertices"] = vertex_json(vertices_in_attractor(ifs));
    members.push_back(std::move(m));
    auto bodies = iterate_bodies(cast_ifs<double>(ifs), a.level, opt.body_budget);
    merged.insert(merged.end(), bodies.begin(), bodies.end());
  }
  const auto coverage = coverage_of_bodies(merged, cast_body<double>(d.seed), sample_directions(spec.dim, a.directions), a.level);
  report["coverage"] = coverage_json(coverage);
  if (spec.kind == "ifs") {
    for (auto& [key, value] : members[0].items()) report[key] = value;
  } else {
    report["members"] = std::move(members);
    report["verdict"] = all_thick ? "thick" : "not_thick";
  }
  if (unresolved) return kExitInconclusive;
  return all_thick ? kExitThick : kExitNotThick;
}

template <class T>
int check_segments(const Spec& spec, const SpecData<T>& d, const CheckArgs& a, Json& report) {
  std::vector<Segment<T>> segs = d.segments;
  auto bodies = segment_bodies(segs);
  for (const auto& p : d.points) bodies.emplace_back(Matrixd(cast_matrix<double>(p)));
  if (bodies.empty()) throw Error(ErrorKind::DegenerateInput, "no segments");
  const auto coverage = coverage_of_bodies(bodies, cast_body<double>(d.seed), sample_directions(spec.dim, a.directions), 0);
  report["coverage"] = coverage_json(coverage);
  report["verdict"] = coverage.max_gap == 0.0 ? "covered" : "gap";
  return coverage.max_gap == 0.0 ? kExitThick : kExitNotThick;
}

int run_check(const CheckArgs& a) {
  Loaded in = load(a.input);
  Json report{{"tool", kToolVersion},
              {"command", "check"},
              {"input_digest", sha256_hex(in.bytes)},
              {"input", spec_to_json(in.spec)},
              {"options",
               {{"exact", a.exact},
                {"exact_fallback", !a.no_fallback},
                {"level", a.level},
                {"directions", a.directions},
                {"max_level", a.max_level}}},
              {"error", nullptr}};
  int code = kExitInconclusive;
  try {
    code = std::visit(
        [&](const auto& d) {
          return in.spec.kind == "segments" ? check_segments(in.spec, d, a, report) : check_systems(in.spec, d, a, report);
        },
        in.spec.data);
  } catch (const Error& e) {
    report["error"] = error_json(e);
    code = exit_for(e);
  }
  report["exit_code"] = code;
  write_output(a.output, dump_json(report));
  return code;
}

// ---------------------------------------------------------------------------
// dims

struct DimsArgs {
  std::string input;
  std::string levels = "1,2";
  std::string scales = "3:8";
  std::string method = "deterministic";
  std::uint64_t seed = kDefaultChaosSeed;
  std::size_t budget = 100'000;
  std::string output;
};

int run_dims(const DimsArgs& a) {
  Loaded in = load(a.input);
  if (in.spec.kind != "ifs") throw Error(ErrorKind::Parse, "dims needs a single IFS spec, got kind '" + in.spec.kind + "'");
  DimensionOptions opt;
  opt.levels.clear();
  std::stringstream ls(a.levels);
  std::string item;
  while (std::getline(ls, item, ',')) opt.levels.push_back(std::stoi(item));
  const auto colon = a.scales.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::Parse, "--scales expects lo:hi");
  opt.box_lo = std::stoi(a.scales.substr(0, colon));
  opt.box_hi = std::stoi(a.scales.substr(colon + 1));
  opt.sample_budget = a.budget;
  if (a.method != "deterministic" && a.method != "chaos") throw Error(ErrorKind::Parse, "--method is deterministic or chaos");

  Json report{{"tool", kToolVersion},
              {"command", "dims"},
              {"input_digest", sha256_hex(in.bytes)},
              {"options", {{"levels", opt.levels}, {"scales", a.scales}, {"method", a.method}, {"seed", a.seed}}},
              {"error", nullptr}};
  int code = 0;
  try {
    std::visit(
        [&](const auto& d) {
          const auto& ifs = d.systems.front();
          DimensionReport rep = dimension_report(ifs, opt);
          if (a.method == "chaos" && rep.box_count.kind == "estimate") {
            rep.box_count = box_count_dimension(attractor_sample(ifs, a.budget, SampleMethod::Chaos, a.seed),
                                                dyadic_scales(opt.box_lo, opt.box_hi));
            rep.bracket_lo = std::min(std::max(1.0, rep.box_count.slope), rep.bracket_hi);
          }
          report["dimension"] = dimension_json(rep);
        },
        in.spec.data);
  } catch (const Error& e) {
    report["error"] = error_json(e);
    code = exit_for(e);
  }
  report["exit_code"] = code;
  write_output(a.output, dump_json(report));
  return code;
}

// ---------------------------------------------------------------------------
// render / plot

struct RenderArgs {
  std::string input;
  int level = 1;
  std::string style = "fill";
  std::string view;
  bool witness = true;
  std::string output;
};

int run_render(const RenderArgs& a) {
  Loaded in = load(a.input);
  RenderOptions opt;
  opt.level = a.level;
  if (a.style != "fill" && a.style != "outline" && a.style != "components")
    throw Error(ErrorKind::Parse, "--style is fill, outline or components");
  opt.style = a.style;
  if (!a.view.empty()) {
    const auto v = rational_list(a.view);
    Vectord u(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) u(static_cast<Eigen::Index>(i)) = to_double(v[i]);
    opt.view = u;
  }
  if (a.witness && in.doc.contains("witness") && !in.doc.at("witness").is_null()) {
    const Json& sep = in.doc.at("witness");
    Hyperplane<double> h;
    h.normal = Vectord(static_cast<Eigen::Index>(sep.at("normal_approx").size()));
    for (std::size_t i = 0; i < sep.at("normal_approx").size(); ++i)
      h.normal(static_cast<Eigen::Index>(i)) = sep.at("normal_approx")[i].get<double>();
    h.offset = sep.at("offset_approx").get<double>();
    opt.witness = h;
  }
  write_output(a.output, render_svg(in.spec, opt));
  return 0;
}

int run_plot(const std::string& input, const std::string& output) {
  Json doc;
  try {
    doc = Json::parse(read_file(input));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.contains("coverage") || !doc.at("coverage").contains("angles"))
    throw Error(ErrorKind::Parse, "plot needs a check report with a 2-D coverage sweep");
  const auto angles = doc.at("coverage").at("angles").get<std::vector<double>>();
  const auto gaps = doc.at("coverage").at("gaps").get<std::vector<double>>();
  if (angles.empty()) throw Error(ErrorKind::Parse, "coverage sweep has no directions");
  write_output(output, coverage_plot_svg(angles, gaps));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thick-shadow analysis of iterated function systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  ConstructArgs ca;
  auto* construct_cmd = app.add_subcommand("construct", "Write a spec for one of the built-in families");
  construct_cmd->add_option("family", ca.family, "mendivil-taylor, rotated-square, cross-corner, simplex, triangle-grid, "
                                                  "polytope-union, venetian-blind or polygon-blind")
      ->required();
  construct_cmd->add_option("--t", ca.t, "Mendivil-Taylor t");
  construct_cmd->add_option("--s", ca.s, "Mendivil-Taylor s");
  construct_cmd->add_option("--r", ca.r, "rotated-square ratio");
  construct_cmd->add_option("--n", ca.n, "cross-corner grid size, venetian-blind level");
  construct_cmd->add_option("--d", ca.d, "dimension");
  construct_cmd->add_option("--lambda", ca.lambda, "simplex contraction");
  construct_cmd->add_option("--inner", ca.inner, "inner simplex ratio");
  construct_cmd->add_option("--shift", ca.shift, "inner simplex translation, comma separated");
  construct_cmd->add_option("--depth", ca.depth, "triangle-grid depth override");
  construct_cmd->add_option("--vertices", ca.vertices, "points as x,y;x,y;...");
  construct_cmd->add_option("--ratio", ca.ratio, "blind epsilons eps_j = ratio^j");
  construct_cmd->add_option("--levels", ca.levels, "polygon-blind refinement levels");
  construct_cmd->add_option("--cascade-depth", ca.cascade_depth, "polygon-blind truncation depth");
  construct_cmd->add_option("-o,--output", ca.output, "output file (default stdout)");

  CheckArgs ka;
  auto* check_cmd = app.add_subcommand("check", "Decide thick shadows and run the supporting checks");
  check_cmd->add_option("spec", ka.input, "spec file")->required();
  check_cmd->add_flag("--exact", ka.exact, "decide every hull test exactly");
  check_cmd->add_flag("--no-fallback", ka.no_fallback, "leave marginal float tests unresolved");
  check_cmd->add_option("--level", ka.level, "coverage level");
  check_cmd->add_option("--directions", ka.directions, "coverage directions");
  check_cmd->add_option("--max-level", ka.max_level, "deepest level for the disconnectedness check");
  check_cmd->add_option("-o,--output", ka.output, "output file (default stdout)");

  DimsArgs da;
  auto* dims_cmd = app.add_subcommand("dims", "Dimension report");
  dims_cmd->add_option("spec", da.input, "spec file")->required();
  dims_cmd->add_option("--levels", da.levels, "pressure levels, comma separated");
  dims_cmd->add_option("--scales", da.scales, "dyadic exponents lo:hi for sampled box counting");
  dims_cmd->add_option("--method", da.method, "deterministic or chaos sampling");
  dims_cmd->add_option("--seed", da.seed, "chaos-game seed");
  dims_cmd->add_option("--budget", da.budget, "sample points");
  dims_cmd->add_option("-o,--output", da.output, "output file (default stdout)");

  RenderArgs ra;
  auto* render_cmd = app.add_subcommand("render", "SVG of a spec or check report");
  render_cmd->add_option("input", ra.input, "spec or check report")->required();
  render_cmd->add_option("--level", ra.level, "iteration level");
  render_cmd->add_option("--style", ra.style, "fill, outline or components");
  render_cmd->add_option("--view", ra.view, "projection direction for 3-D specs, comma separated");
  render_cmd->add_flag("!--no-witness", ra.witness, "omit the witness line of a report");
  render_cmd->add_option("-o,--output", ra.output, "output file (default stdout)");

  std::string plot_in, plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "SVG of a coverage sweep from a check report");
  plot_cmd->add_option("report", plot_in, "check report")->required();
  plot_cmd->add_option("-o,--output", plot_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*construct_cmd) {
      try {
        const Spec spec = construct(ca);
        write_output(ca.output, dump_json(spec_to_json(spec)));
        return 0;
      } catch (const Error& e) {
        std::cout << dump_json({{"error", error_json(e)}});
        return e.kind() == ErrorKind::Parse ? kExitUsage : exit_for(e);
      }
    }
    if (*check_cmd) return run_check(ka);
    if (*dims_cmd) return run_dims(da);
    if (*render_cmd) return run_render(ra);
    if (*plot_cmd) return run_plot(plot_in, plot_out);
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
