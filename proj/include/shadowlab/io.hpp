#pragma once

// JSON interchange for IFS specs and reports.  Exact numbers travel as
// strings ("p/q", "a+b*sqrt2", hex floats) so nothing passes through binary64
// unless the spec says so.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "shadowlab/constructions.hpp"
#include "shadowlab/dimension.hpp"
#include "shadowlab/shadow.hpp"

namespace shadowlab {

using Json = nlohmann::json;

inline constexpr int kSpecVersion = 1;
inline constexpr const char* kToolVersion = "shadowlab 1.0.0";

template <class T>
struct SpecData {
  using Scalar = T;
  std::vector<IFS<T>> systems;        // one for "ifs", one per member for "ifs_union"
  std::vector<bool> validated;        // per system: seed invariance was checked
  ConvexPointSet<T> seed;             // the whole body C
  std::vector<Segment<T>> segments;   // "segments" only
  std::vector<Vector<T>> points;      // "segments" only
};

using AnySpecData = std::variant<SpecData<double>, SpecData<Rational>, SpecData<QSqrt2>>;

struct Spec {
  std::string kind;  // "ifs", "ifs_union" or "segments"
  Eigen::Index dim = 0;
  Json meta = Json::object();
  AnySpecData data;

  std::string arithmetic() const;
};

template <class T>
std::string arithmetic_name() {
  if constexpr (std::same_as<T, double>)
    return "float";
  else
    return ScalarTraits<T>::name;
}

/// Throws Error(Parse) on malformed documents and forwards validation errors
/// of the maps.
Spec parse_spec(std::string_view text);
Spec spec_from_json(const Json& doc);
Json spec_to_json(const Spec& spec);

/// Sorted keys, two-space indent, doubles as %.17g, trailing newline.
std::string dump_json(const Json& doc);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

// ---------------------------------------------------------------------------
// Spec builders

template <class T>
Spec make_ifs_spec(const IFS<T>& ifs, Json meta = Json::object(), bool validated = true) {
  Spec s;
  s.kind = "ifs";
  s.dim = ifs.dim;
  s.meta = std::move(meta);
  SpecData<T> d;
  d.systems.push_back(ifs);
  d.validated.push_back(validated);
  d.seed = ifs.seed;
  s.data = std::move(d);
  return s;
}

template <class T>
Spec make_union_spec(std::vector<IFS<T>> members, ConvexPointSet<T> seed, Json meta = Json::object()) {
  Spec s;
  s.kind = "ifs_union";
  s.dim = seed.dim();
  s.meta = std::move(meta);
  SpecData<T> d;
  d.validated.assign(members.size(), true);
  d.systems = std::move(members);
  d.seed = std::move(seed);
  s.data = std::move(d);
  return s;
}

template <class T>
Spec make_segments_spec(std::vector<Segment<T>> segments, std::vector<Vector<T>> points, ConvexPointSet<T> seed,
                        Json meta = Json::object()) {
  Spec s;
  s.kind = "segments";
  s.dim = seed.dim();
  s.meta = std::move(meta);
  SpecData<T> d;
  d.segments = std::move(segments);
  d.points = std::move(points);
  d.seed = std::move(seed);
  s.data = std::move(d);
  return s;
}

// ---------------------------------------------------------------------------
// Report payloads

template <class T>
Json vector_json(const Vector<T>& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(format_exact(v(i)));
  return out;
}

inline Json vector_json_float(const Vectord& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

template <class T>
Json hyperplane_json(const Hyperplane<T>& h) {
  return {{"normal", vector_json(h.normal)},
          {"offset", format_exact(h.offset)},
          {"normal_approx", vector_json_float(cast_matrix<double>(h.normal))},
          {"offset_approx", to_double(h.offset)}};
}

template <class T>
Json components_json(const ComponentDecomposition<T>& cd) {
  Json parts = Json::array();
  Json diam = Json::array();
  for (std::size_t p = 0; p < cd.size(); ++p) {
    parts.push_back(cd.parts[p]);
    diam.push_back(std::sqrt(to_double(cd.squared_diameters[p])));
  }
  return {{"level", cd.level},
          {"count", cd.size()},
          {"parts", parts},
          {"diameters", diam},
          {"marginal_pairs", cd.marginal_pairs},
          {"escalated_pairs", cd.escalated_pairs}};
}

template <class T>
Json shadow_json(const ShadowReport<T>& rep) {
  Json out{{"verdict", rep.thick ? "thick" : "not_thick"},
           {"components", components_json(rep.components)},
           {"tested_splits", rep.tested_splits},
           {"arithmetic", rep.arithmetic},
           {"marginal_tests", rep.marginal_tests},
           {"escalated_tests", rep.escalated_tests},
           {"failing_split", nullptr}};
  if (rep.failing_split)
    out["failing_split"] = {{"subset", rep.failing_split->subset},
                            {"separator", hyperplane_json(rep.failing_split->separator)}};
  return out;
}

Json coverage_json(const CoverageReport& rep);
Json disconnect_json(const DisconnectReport& rep);
Json vertex_json(const VertexReport& rep);
Json box_count_json(const BoxCount& bc);
Json dimension_json(const DimensionReport& rep);

}  // namespace shadowlab
