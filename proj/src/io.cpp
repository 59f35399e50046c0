#include "shadowlab/io.hpp"

#include <cmath>
#include <cstdio>

#include <openssl/evp.h>

namespace shadowlab {

std::string Spec::arithmetic() const {
  return std::visit([](const auto& d) { return arithmetic_name<typename std::decay_t<decltype(d)>::Scalar>(); }, data);
}

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) parse_error(std::string("missing field '") + name + "'");
  return obj.at(name);
}

template <class T>
T scalar_from(const Json& v) {
  if (v.is_string()) {
    try {
      return parse_scalar<T>(v.get<std::string>());
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      parse_error("bad number '" + v.get<std::string>() + "': " + e.what());
    }
  }
  if (v.is_number_integer()) return T(v.get<long long>());
  if (v.is_number_float()) {
    if constexpr (std::same_as<T, double>) return v.get<double>();
    parse_error("exact specs need numbers as strings");
  }
  parse_error("expected a number, got " + v.dump());
}

template <class T>
Vector<T> vector_from(const Json& v, Eigen::Index dim) {
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != dim)
    parse_error("expected a list of " + std::to_string(dim) + " numbers");
  Vector<T> out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out(i) = scalar_from<T>(v[static_cast<std::size_t>(i)]);
  return out;
}

template <class T>
Matrix<T> points_from(const Json& v, Eigen::Index dim) {
  if (!v.is_array() || v.empty()) parse_error("expected a nonempty list of points");
  Matrix<T> out(dim, static_cast<Eigen::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = vector_from<T>(v[j], dim);
  return out;
}

template <class T>
std::pair<IFS<T>, bool> ifs_from(const Json& obj, Eigen::Index dim) {
  const Json& maps = field(obj, "maps");
  if (!maps.is_array() || maps.empty()) parse_error("'maps' must be a nonempty list");
  std::vector<AffineMap<T>> out;
  for (const Json& m : maps) {
    const Json& rows = field(m, "matrix");
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim) parse_error("matrix must have dim rows");
    Matrix<T> a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) a.row(i) = vector_from<T>(rows[static_cast<std::size_t>(i)], dim).transpose();
    out.push_back(make_affine_map_unchecked<T>(std::move(a), vector_from<T>(field(m, "translation"), dim)));
  }
  IfsOptions opt;
  if (obj.contains("options")) {
    const Json& o = obj.at("options");
    if (!o.is_object()) parse_error("'options' must be an object");
    opt.allow_eventual = o.value("allow_eventual", false);
    opt.validate_seed = o.value("validate_seed", true);
  }
  return {make_ifs<T>(std::move(out), ConvexPointSet<T>(points_from<T>(field(obj, "seed"), dim)), opt), opt.validate_seed};
}

template <class T>
SpecData<T> data_from(const Json& doc, const std::string& kind, Eigen::Index dim) {
  SpecData<T> d;
  if (kind == "ifs") {
    auto [ifs, validated] = ifs_from<T>(doc, dim);
    d.seed = ifs.seed;
    d.systems.push_back(std::move(ifs));
    d.validated.push_back(validated);
  } else if (kind == "ifs_union") {
    const Json& members = field(doc, "members");
    if (!members.is_array() || members.empty()) parse_error("'members' must be a nonempty list");
    for (const Json& m : members) {
      auto [ifs, validated] = ifs_from<T>(m, dim);
      d.systems.push_back(std::move(ifs));
      d.validated.push_back(validated);
    }
    d.seed = ConvexPointSet<T>(points_from<T>(field(doc, "seed"), dim));
  } else {
    const Json& segs = field(doc, "segments");
    if (!segs.is_array()) parse_error("'segments' must be a list");
    for (const Json& s : segs) {
      if (!s.is_array() || s.size() != 2) parse_error("a segment is a pair of points");
      d.segments.push_back({vector_from<T>(s[0], dim), vector_from<T>(s[1], dim)});
    }
    if (doc.contains("points")) {
      const Json& pts = doc.at("points");
      if (!pts.is_array()) parse_error("'points' must be a list");
      for (const Json& p : pts) d.points.push_back(vector_from<T>(p, dim));
    }
    d.seed = ConvexPointSet<T>(points_from<T>(field(doc, "seed"), dim));
  }
  return d;
}

template <class T>
Json points_json(const Matrix<T>& pts) {
  Json out = Json::array();
  for (Eigen::Index j = 0; j < pts.cols(); ++j) out.push_back(vector_json<T>(pts.col(j)));
  return out;
}

template <class T>
void ifs_into(Json& obj, const IFS<T>& ifs, bool validated) {
  Json maps = Json::array();
  for (const auto& m : ifs.maps) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.matrix.rows(); ++i) rows.push_back(vector_json<T>(m.matrix.row(i).transpose()));
    maps.push_back({{"matrix", rows}, {"translation", vector_json(m.translation)}});
  }
  obj["maps"] = std::move(maps);
  obj["seed"] = points_json(ifs.seed.points);
  Json options = Json::object();
  if (ifs.contraction_level > 1) options["allow_eventual"] = true;
  if (!validated) options["validate_seed"] = false;
  if (!options.empty()) obj["options"] = std::move(options);
}

void dump_into(std::string& out, const Json& v, int indent) {
  auto pad = [&](int n) { out.append(static_cast<std::size_t>(n), ' '); };
  switch (v.type()) {
    case Json::value_t::number_float: {
      const double x = v.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        break;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      break;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        break;
      }
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        out += '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump_into(out, v[i], indent);
        }
        out += ']';
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        pad(indent + 2);
        dump_into(out, v[i], indent + 2);
        out += i + 1 < v.size() ? ",\n" : "\n";
      }
      pad(indent);
      out += ']';
      break;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {  // std::map: keys sorted
        pad(indent + 2);
        out += Json(it.key()).dump();
        out += ": ";
        dump_into(out, it.value(), indent + 2);
        out += i + 1 < v.size() ? ",\n" : "\n";
      }
      pad(indent);
      out += '}';
      break;
    }
    default:
      out += v.dump();
  }
}

Json double_list(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

}  // namespace

Spec spec_from_json(const Json& doc) {
  if (!doc.is_object()) parse_error("spec must be a JSON object");
  const Json& version = field(doc, "version");
  if (!version.is_number_integer() || version.get<int>() != kSpecVersion)
    parse_error("unsupported spec version " + version.dump());
  Spec s;
  const Json& kind = field(doc, "kind");
  if (!kind.is_string()) parse_error("'kind' must be a string");
  s.kind = kind.get<std::string>();
  if (s.kind != "ifs" && s.kind != "ifs_union" && s.kind != "segments") parse_error("unknown kind '" + s.kind + "'");
  const Json& dim = field(doc, "dim");
  if (!dim.is_number_integer() || dim.get<long long>() < 1 || dim.get<long long>() > 16)
    parse_error("'dim' must be an integer in [1, 16]");
  s.dim = dim.get<Eigen::Index>();
  const std::string arith = doc.value("arithmetic", std::string("rational"));
  if (doc.contains("meta")) {
    if (!doc.at("meta").is_object()) parse_error("'meta' must be an object");
    s.meta = doc.at("meta");
  }
  if (arith == "rational")
    s.data = data_from<Rational>(doc, s.kind, s.dim);
  else if (arith == "qsqrt2")
    s.data = data_from<QSqrt2>(doc, s.kind, s.dim);
  else if (arith == "float")
    s.data = data_from<double>(doc, s.kind, s.dim);
  else
    parse_error("unknown arithmetic '" + arith + "'");
  return s;
}

Spec parse_spec(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
  try {
    return spec_from_json(doc);
  } catch (const Json::exception& e) {
    parse_error(std::string("malformed spec: ") + e.what());
  }
}

Json spec_to_json(const Spec& spec) {
  Json doc{{"version", kSpecVersion}, {"kind", spec.kind}, {"dim", spec.dim}, {"meta", spec.meta}};
  std::visit(
      [&](const auto& d) {
        using T = typename std::decay_t<decltype(d)>::Scalar;
        doc["arithmetic"] = arithmetic_name<T>();
        if (spec.kind == "ifs") {
          ifs_into(doc, d.systems.front(), d.validated.front());
        } else if (spec.kind == "ifs_union") {
          Json members = Json::array();
          for (std::size_t i = 0; i < d.systems.size(); ++i) {
            Json m = Json::object();
            ifs_into(m, d.systems[i], d.validated[i]);
            members.push_back(std::move(m));
          }
          doc["members"] = std::move(members);
          doc["seed"] = points_json(d.seed.points);
        } else {
          Json segs = Json::array();
          for (const auto& s : d.segments) segs.push_back(Json::array({vector_json(s.a), vector_json(s.b)}));
          doc["segments"] = std::move(segs);
          Json pts = Json::array();
          for (const auto& p : d.points) pts.push_back(vector_json(p));
          doc["points"] = std::move(pts);
          doc["seed"] = points_json(d.seed.points);
        }
      },
      spec.data);
  return doc;
}

std::string dump_json(const Json& doc) {
  std::string out;
  dump_into(out, doc, 0);
  out += '\n';
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::Internal, "SHA-256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

// ---------------------------------------------------------------------------

Json coverage_json(const CoverageReport& rep) {
  Json dirs = Json::array();
  Json angles = Json::array();
  for (Eigen::Index j = 0; j < rep.directions.cols(); ++j) {
    dirs.push_back(vector_json_float(rep.directions.col(j)));
    if (rep.directions.rows() == 2) {
      double a = std::atan2(rep.directions(1, j), rep.directions(0, j));
      if (a < 0) a += std::numbers::pi;
      if (a >= std::numbers::pi) a -= std::numbers::pi;
      angles.push_back(a);
    }
  }
  Json out{{"level", rep.level}, {"directions", dirs}, {"gaps", double_list(rep.gaps)}, {"max_gap", rep.max_gap}};
  if (rep.directions.rows() == 2) out["angles"] = std::move(angles);
  return out;
}

Json disconnect_json(const DisconnectReport& rep) {
  return {{"levels", rep.levels},
          {"max_diameters", double_list(rep.max_diameters)},
          {"component_counts", rep.component_counts},
          {"verdict", rep.certified ? "certified_disconnected" : "inconclusive"},
          {"rho", rep.rho ? Json(*rep.rho) : Json(nullptr)}};
}

Json vertex_json(const VertexReport& rep) {
  Json verts = Json::array();
  for (Eigen::Index j = 0; j < rep.vertices.cols(); ++j) verts.push_back(vector_json_float(rep.vertices.col(j)));
  Json present = Json::array();
  for (bool b : rep.present) present.push_back(b);
  return {{"vertices", verts},
          {"present", present},
          {"min_distance", double_list(rep.min_distance)},
          {"radius", rep.radius},
          {"tolerance", rep.tolerance}};
}

Json box_count_json(const BoxCount& bc) {
  return {{"kind", bc.kind},
          {"scales", double_list(bc.scales)},
          {"counts", double_list(bc.counts)},
          {"slope", bc.slope},
          {"residual", bc.residual}};
}

Json dimension_json(const DimensionReport& rep) {
  Json roots = Json::array();
  for (const auto& r : rep.affinity_roots) roots.push_back({{"level", r.level}, {"root", r.root}, {"saturated", r.saturated}});
  return {{"similarity_dim", rep.similarity_dim ? Json(*rep.similarity_dim) : Json(nullptr)},
          {"affinity_bound_closed", rep.affinity_bound_closed ? Json(*rep.affinity_bound_closed) : Json(nullptr)},
          {"affinity_roots", roots},
          {"box_count", box_count_json(rep.box_count)},
          {"bracket", Json::array({rep.bracket_lo, rep.bracket_hi})}};
}

}  // namespace shadowlab
