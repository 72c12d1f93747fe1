#pragma once

#include <string>
#include <variant>

#include "json.hpp"
#include "stickknot/diagram.hpp"
#include "stickknot/error.hpp"
#include "stickknot/pd.hpp"

namespace stickknot {

using json = nlohmann::json;

/// Anything the CLI reads as a knot: a diagram, a 3D polygon, or a bare PD code.
using AnyDiagram = std::variant<PlanarStickDiagram, SphericalStickDiagram, PolygonalKnot3D, PDCode>;

namespace json_detail {

inline json to_json(PlanarPoint p) { return json::array({p.x, p.y}); }
inline json to_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }
inline json to_json(const SpherePoint& p) { return to_json(p.vec()); }

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw Error(ErrorCode::ParseError, std::string(what) + " must be a number");
  return j.get<double>();
}

inline PlanarPoint planar_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::ParseError, "planar point must be [x, y]");
  return {number(j[0], "coordinate"), number(j[1], "coordinate")};
}

inline Vec3 vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::ParseError, "point must be [x, y, z]");
  return {number(j[0], "coordinate"), number(j[1], "coordinate"), number(j[2], "coordinate")};
}

template <class Point>
json crossings_to_json(const std::vector<CrossingT<Point>>& xs) {
  json out = json::array();
  for (const auto& x : xs) {
    json c;
    c["strands"] = {x.strands[0], x.strands[1]};
    c["over"] = x.over ? json(*x.over) : json(nullptr);
    c["point"] = to_json(x.point);
    out.push_back(c);
  }
  return out;
}

/// Copies over-strand choices from the JSON crossings onto the freshly
/// extracted ones, matching by strand pair.
template <class Point>
void apply_crossings(std::vector<CrossingT<Point>>& found, const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "crossings must be an array");
  if (j.size() != found.size())
    throw Error(ErrorCode::ParseError, "diagram has " + std::to_string(found.size()) + " crossings, file lists " +
                                           std::to_string(j.size()));
  std::vector<bool> used(found.size(), false);
  for (const auto& c : j) {
    if (!c.contains("strands") || !c["strands"].is_array() || c["strands"].size() != 2)
      throw Error(ErrorCode::ParseError, "crossing needs \"strands\": [i, j]");
    int s = c["strands"][0].get<int>(), t = c["strands"][1].get<int>();
    if (s > t) std::swap(s, t);
    int match = -1;
    for (std::size_t k = 0; k < found.size(); ++k)
      if (!used[k] && found[k].strands[0] == s && found[k].strands[1] == t) {
        match = static_cast<int>(k);
        break;
      }
    if (match < 0)
      throw Error(ErrorCode::ParseError,
                  "no crossing between strands " + std::to_string(s) + " and " + std::to_string(t));
    used[match] = true;
    if (c.contains("over") && !c["over"].is_null()) {
      const int o = c["over"].get<int>();
      if (o != s && o != t) throw Error(ErrorCode::ParseError, "over-strand is not one of the crossing's strands");
      found[match].over = o;
    }
  }
}

}  // namespace json_detail

inline json to_json(const PlanarStickDiagram& d) {
  json j;
  j["kind"] = "planar";
  j["vertices"] = json::array();
  for (auto v : d.vertices) j["vertices"].push_back(json_detail::to_json(v));
  j["crossings"] = json_detail::crossings_to_json(d.crossings);
  return j;
}

/// Arcs are stored as circle normal plus angles in the circle's canonical
/// frame; endpoints are included for readers and ignored on input.
inline json to_json(const SphericalStickDiagram& d) {
  json j;
  j["kind"] = "spherical";
  j["arcs"] = json::array();
  for (const auto& a : d.arcs) {
    j["arcs"].push_back({{"normal", json_detail::to_json(a.circle().normal())},
                         {"start_angle", a.start_angle()},
                         {"end_angle", a.end_angle()},
                         {"start", json_detail::to_json(a.start_point())},
                         {"end", json_detail::to_json(a.end_point())}});
  }
  j["crossings"] = json_detail::crossings_to_json(d.crossings);
  return j;
}

inline json to_json(const PolygonalKnot3D& k) {
  json j;
  j["kind"] = "polygon3d";
  j["vertices"] = json::array();
  for (auto v : k.vertices) j["vertices"].push_back(json_detail::to_json(v));
  return j;
}

inline json to_json(const PDCode& pd) { return {{"kind", "pd"}, {"pd", to_string(pd)}}; }

inline json to_json(const AnyDiagram& d) {
  return std::visit([](const auto& x) { return to_json(x); }, d);
}

inline PlanarStickDiagram planar_from_json(const json& j) {
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw Error(ErrorCode::ParseError, "missing vertices");
  std::vector<PlanarPoint> v;
  for (const auto& p : j["vertices"]) v.push_back(json_detail::planar_point(p));
  PlanarStickDiagram d = extract_crossings_planar(v);
  if (j.contains("crossings")) json_detail::apply_crossings(d.crossings, j["crossings"]);
  return d;
}

inline SphericalStickDiagram spherical_from_json(const json& j) {
  if (!j.contains("arcs") || !j["arcs"].is_array()) throw Error(ErrorCode::ParseError, "missing arcs");
  std::vector<GreatArc> arcs;
  for (const auto& a : j["arcs"]) {
    if (!a.contains("normal") || !a.contains("start_angle") || !a.contains("end_angle"))
      throw Error(ErrorCode::ParseError, "arc needs normal, start_angle, end_angle");
    arcs.emplace_back(GreatCircle(json_detail::vec3(a["normal"])), json_detail::number(a["start_angle"], "angle"),
                      json_detail::number(a["end_angle"], "angle"));
  }
  SphericalStickDiagram d = extract_crossings_spherical(arcs);
  if (j.contains("crossings")) json_detail::apply_crossings(d.crossings, j["crossings"]);
  return d;
}

inline PolygonalKnot3D polygon_from_json(const json& j) {
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw Error(ErrorCode::ParseError, "missing vertices");
  PolygonalKnot3D k;
  for (const auto& p : j["vertices"]) k.vertices.push_back(json_detail::vec3(p));
  if (k.vertices.size() < 3) throw Error(ErrorCode::ParseError, "a polygon needs at least 3 vertices");
  return k;
}

inline AnyDiagram diagram_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw Error(ErrorCode::ParseError, "expected an object with a \"kind\" field");
  const std::string kind = j["kind"];
  if (kind == "planar") return planar_from_json(j);
  if (kind == "spherical") return spherical_from_json(j);
  if (kind == "polygon3d") return polygon_from_json(j);
  if (kind == "pd") {
    PDCode pd = parse_pd(j.at("pd").get<std::string>());
    validate(pd);
    return pd;
  }
  throw Error(ErrorCode::ParseError, "unknown diagram kind '" + kind + "'");
}

/// Reads JSON, or falls back to PD text (`X[...]`) or a Gauss code.
inline AnyDiagram parse_diagram_text(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return PDCode{};
  if (text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, e.what());
    }
    return diagram_from_json(j);
  }
  if (text[first] == 'O' || text[first] == 'U') {
    PDCode pd = from_gauss(parse_gauss(text));
    validate(pd);
    return pd;
  }
  PDCode pd = parse_pd(text);
  validate(pd);
  return pd;
}

/// PD code of any diagram kind. 3D polygons are projected along a seeded
/// generic direction.
inline PDCode pd_of(const AnyDiagram& d, unsigned seed = 1) {
  struct {
    unsigned seed;
    PDCode operator()(const PlanarStickDiagram& x) const { return to_pd_code(x); }
    PDCode operator()(const SphericalStickDiagram& x) const { return to_pd_code(x); }
    PDCode operator()(const PolygonalKnot3D& k) const {
      return to_pd_code(project_orthogonal(k, search_generic_direction(k, seed)));
    }
    PDCode operator()(const PDCode& pd) const { return pd; }
  } visitor{seed};
  return std::visit(visitor, d);
}

}  // namespace stickknot
