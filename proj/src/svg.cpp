#include "shadowlab/svg.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Geometry>

namespace shadowlab {

namespace {

constexpr std::array<const char*, 8> kPalette{"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                              "#66a61e", "#e6ab02", "#a6761d", "#666666"};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

// World (projected to the plane) to viewBox coordinates.
struct Frame {
  Matrixd basis;  // 2 x d
  double x0 = 0.0, y0 = 0.0, scale = 1.0;

  Frame(const Matrixd& seed, const Matrixd& b) : basis(b) {
    const Matrixd p = basis * seed;
    const double lo_x = p.row(0).minCoeff(), hi_x = p.row(0).maxCoeff();
    const double lo_y = p.row(1).minCoeff(), hi_y = p.row(1).maxCoeff();
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
    scale = 1000.0 / (span * 1.1);
    x0 = (lo_x + hi_x) / 2;
    y0 = (lo_y + hi_y) / 2;
  }
  Matrixd project(const Matrixd& pts) const { return basis * pts; }
  std::string point(double x, double y) const {
    return fmt(500.0 + (x - x0) * scale) + "," + fmt(500.0 - (y - y0) * scale);
  }
};

Matrixd view_basis(Eigen::Index dim, const std::optional<Vectord>& view) {
  if (dim == 2) return Matrixd::Identity(2, 2);
  if (dim != 3) throw Error(ErrorKind::UnsupportedDimension, "rendering supports d = 2 and d = 3");
  Vectord v = view.value_or(Vectord::Constant(3, 1.0));
  if (v.size() != 3 || v.norm() == 0.0) throw Error(ErrorKind::ZeroDirection, "view direction must be a nonzero 3-vector");
  v.normalize();
  Eigen::Vector3d w(v(0), v(1), v(2));
  Eigen::Vector3d helper = std::abs(w.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  Eigen::Vector3d e1 = helper.cross(w).normalized();
  Eigen::Vector3d e2 = w.cross(e1);
  Matrixd b(2, 3);
  b.row(0) = e1.transpose();
  b.row(1) = e2.transpose();
  return b;
}

std::string polygon(const Frame& f, const Matrixd& pts2, const std::string& attrs) {
  const Matrixd hull = hull_vertices_2d(ConvexPointSet<double>(pts2));
  if (hull.cols() == 1) {
    return "<circle cx=\"" + fmt(500.0 + (hull(0, 0) - f.x0) * f.scale) + "\" cy=\"" +
           fmt(500.0 - (hull(1, 0) - f.y0) * f.scale) + "\" r=\"1.000\" " + attrs + "/>\n";
  }
  std::string s = "<polygon points=\"";
  for (Eigen::Index j = 0; j < hull.cols(); ++j) {
    if (j) s += ' ';
    s += f.point(hull(0, j), hull(1, j));
  }
  return s + "\" " + attrs + "/>\n";
}

std::string header() {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
         "viewBox=\"0 0 1000 1000\">\n"
         "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n";
}

std::string body_attrs(const std::string& style, const char* colour) {
  if (style == "outline") return std::string("fill=\"none\" stroke=\"") + colour + "\" stroke-width=\"1\"";
  return std::string("fill=\"") + colour + "\" fill-opacity=\"0.85\" stroke=\"none\"";
}

template <class T>
std::string render_systems(const Spec& spec, const SpecData<T>& d, const RenderOptions& opt) {
  const Matrixd seed = cast_matrix<double>(d.seed.points);
  const Frame f(seed, view_basis(spec.dim, opt.view));
  std::string out = header();
  out += "<g id=\"seed\">\n" + polygon(f, f.project(seed), "fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\"") + "</g>\n";

  for (std::size_t m = 0; m < d.systems.size(); ++m) {
    const IFS<T>& ifs = d.systems[m];
    // Colour by level-1 component for a single system, by member for a union.
    std::vector<std::size_t> colour(ifs.size(), m);
    std::vector<ConvexPointSet<double>> part_hulls;
    if (d.systems.size() == 1) {
      const auto cd = component_decomposition(iterate_bodies(ifs, 1), CheckOptions{}, 1);
      for (std::size_t p = 0; p < cd.size(); ++p) {
        for (std::size_t b : cd.parts[p]) colour[b] = p;
        part_hulls.push_back(cast_body<double>(cd.part_body(p)));
      }
    }
    const auto bodies = iterate_bodies(cast_ifs<double>(ifs), opt.level);
    std::size_t per_letter = 1;
    for (int k = 1; k < opt.level; ++k) per_letter *= ifs.size();
    out += "<g id=\"system-" + std::to_string(m) + "\">\n";
    for (std::size_t b = 0; b < bodies.size(); ++b) {
      const std::size_t first = opt.level == 0 ? 0 : b / per_letter;
      const char* c = kPalette[colour[first] % kPalette.size()];
      out += "<g>" + polygon(f, f.project(bodies[b].points), body_attrs(opt.style, c)) + "</g>\n";
    }
    out += "</g>\n";
    if (opt.style == "components") {
      out += "<g id=\"components-" + std::to_string(m) + "\">\n";
      for (const auto& h : part_hulls)
        out += polygon(f, f.project(h.points), "fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"");
      out += "</g>\n";
    }
  }
  return out;
}

template <class T>
std::string render_segments(const Spec& spec, const SpecData<T>& d, const RenderOptions& opt) {
  const Matrixd seed = cast_matrix<double>(d.seed.points);
  const Frame f(seed, view_basis(spec.dim, opt.view));
  std::string out = header();
  out += "<g id=\"seed\">\n" + polygon(f, f.project(seed), "fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"1\"") + "</g>\n";
  out += "<g id=\"segments\" stroke=\"#1b1b1b\" stroke-width=\"1.5\" fill=\"none\">\n";
  for (const auto& s : d.segments) {
    const Vectord a = f.project(cast_matrix<double>(s.a));
    const Vectord b = f.project(cast_matrix<double>(s.b));
    out += "<path d=\"M" + f.point(a(0), a(1)) + " L" + f.point(b(0), b(1)) + "\"/>\n";
  }
  out += "</g>\n<g id=\"points\" fill=\"#d95f02\">\n";
  for (const auto& p : d.points) {
    const Vectord q = f.project(cast_matrix<double>(p));
    out += "<circle cx=\"" + fmt(500.0 + (q(0) - f.x0) * f.scale) + "\" cy=\"" + fmt(500.0 - (q(1) - f.y0) * f.scale) +
           "\" r=\"2.000\"/>\n";
  }
  return out + "</g>\n";
}

std::string witness_overlay(const Spec& spec, const Hyperplane<double>& h, const Matrixd& seed) {
  if (spec.dim != 2) return "";
  const Frame f(seed, Matrixd::Identity(2, 2));
  const double nn = h.normal.squaredNorm();
  if (nn == 0.0) return "";
  const Vectord p0 = h.normal * (h.offset / nn);
  Vectord dir(2);
  dir << -h.normal(1), h.normal(0);
  dir.normalize();
  const double reach = 2000.0 / f.scale;
  const Vectord a = p0 - reach * dir, b = p0 + reach * dir;
  return "<g id=\"witness\">\n<path d=\"M" + f.point(a(0), a(1)) + " L" + f.point(b(0), b(1)) +
         "\" stroke=\"#c00000\" stroke-width=\"2\" fill=\"none\"/>\n</g>\n";
}

}  // namespace

std::string render_svg(const Spec& spec, const RenderOptions& opt) {
  if (opt.level < 0 || opt.level > 12) throw Error(ErrorKind::ParamOutOfRange, "render level must lie in [0, 12]");
  if (spec.dim != 2 && spec.dim != 3) throw Error(ErrorKind::UnsupportedDimension, "rendering supports d = 2 and d = 3");
  return std::visit(
      [&](const auto& d) {
        std::string out = spec.kind == "segments" ? render_segments(spec, d, opt) : render_systems(spec, d, opt);
        if (opt.witness) out += witness_overlay(spec, *opt.witness, cast_matrix<double>(d.seed.points));
        return out + "</svg>\n";
      },
      spec.data);
}

std::string coverage_plot_svg(const std::vector<double>& angles, const std::vector<double>& gaps) {
  if (angles.empty() || angles.size() != gaps.size())
    throw Error(ErrorKind::ParamOutOfRange, "coverage plot needs a nonempty 2-D direction sweep");
  double top = 0.0;
  for (double g : gaps) top = std::max(top, g);
  const double scale = top > 0.0 ? 800.0 / top : 0.0;
  auto x = [](double a) { return 50.0 + 900.0 * a / std::numbers::pi; };
  auto y = [&](double g) { return 900.0 - g * scale; };

  std::string out = header();
  out += "<path d=\"M50.000,100.000 L50.000,900.000 L950.000,900.000\" stroke=\"#888888\" stroke-width=\"1\" fill=\"none\"/>\n";
  out += "<path d=\"M50.000,900.000 L950.000,900.000\" stroke=\"#000000\" stroke-width=\"3\" fill=\"none\"/>\n";
  out += "<text x=\"50.000\" y=\"940.000\" font-family=\"sans-serif\" font-size=\"20\">0</text>\n";
  out += "<text x=\"930.000\" y=\"940.000\" font-family=\"sans-serif\" font-size=\"20\">pi</text>\n";
  out += "<text x=\"60.000\" y=\"90.000\" font-family=\"sans-serif\" font-size=\"20\">max gap " + fmt(top) + "</text>\n";

  std::vector<std::size_t> order(angles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return angles[a] < angles[b]; });
  out += "<polyline fill=\"none\" stroke=\"#d95f02\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += ' ';
    out += fmt(x(angles[order[i]])) + "," + fmt(y(gaps[order[i]]));
  }
  out += "\"/>\n</svg>\n";
  return out;
}

}  // namespace shadowlab
