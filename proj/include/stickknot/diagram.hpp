#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "stickknot/error.hpp"
#include "stickknot/geom.hpp"
#include "stickknot/pd.hpp"

namespace stickknot {

/// A self-intersection of a diagram. `strands` holds the two stick (or arc)
/// indices in increasing order; `offsets` the position along each, as a
/// segment parameter in [0,1] (planar) or arc offset in radians (spherical).
template <class Point>
struct CrossingT {
  std::array<int, 2> strands{};
  std::array<double, 2> offsets{};
  Point point{};
  std::optional<int> over;

  int other(int strand) const { return strand == strands[0] ? strands[1] : strands[0]; }
  bool involves(int strand) const { return strands[0] == strand || strands[1] == strand; }
  double offset_on(int strand) const { return strand == strands[0] ? offsets[0] : offsets[1]; }
};

using PlanarCrossing = CrossingT<PlanarPoint>;
using SphericalCrossing = CrossingT<SpherePoint>;

/// Closed polygon in the plane. Stick i runs from vertex i to vertex i+1.
struct PlanarStickDiagram {
  std::vector<PlanarPoint> vertices;
  std::vector<PlanarCrossing> crossings;

  int stick_count() const { return static_cast<int>(vertices.size()); }
  Segment stick(int i) const {
    return {vertices[i], vertices[(i + 1) % vertices.size()]};
  }
};

/// Closed chain of great-circle arcs; arc k ends where arc k+1 starts.
struct SphericalStickDiagram {
  std::vector<GreatArc> arcs;
  std::vector<SphericalCrossing> crossings;

  int arc_count() const { return static_cast<int>(arcs.size()); }
};

struct PolygonalKnot3D {
  std::vector<Vec3> vertices;
};

namespace diagram_detail {

inline double planar_scale(const std::vector<PlanarPoint>& v) {
  double s = 1.0;
  for (auto p : v) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return s;
}

/// Signed distance of c from the line through a, b.
inline double side(PlanarPoint a, PlanarPoint b, PlanarPoint c) {
  return cross(b - a, c - a) / norm(b - a);
}

/// Parameter of c's foot point on segment ab.
inline double foot(PlanarPoint a, PlanarPoint b, PlanarPoint c) {
  auto d = b - a;
  return dot(c - a, d) / dot(d, d);
}

template <class Point, class Dist>
void reject_coincident_crossings(const std::vector<CrossingT<Point>>& xs, Dist dist, double tol) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (dist(xs[i].point, xs[j].point) <= tol)
        throw Error(ErrorCode::DegenerateDiagram, "three strands meet at one point");
}

}  // namespace diagram_detail

/// Finds every crossing of the closed polygon. Throws DegenerateDiagram for
/// repeated vertices, a vertex touching a non-incident stick, folded adjacent
/// sticks, or triple points.
inline PlanarStickDiagram extract_crossings_planar(const std::vector<PlanarPoint>& vertices) {
  using namespace diagram_detail;
  const int n = static_cast<int>(vertices.size());
  if (n < 3) throw Error(ErrorCode::DegenerateDiagram, "a closed polygon needs at least 3 sticks");
  const double tol = kPositionTol * planar_scale(vertices);
  PlanarStickDiagram d;
  d.vertices = vertices;
  for (int i = 0; i < n; ++i)
    if (d.stick(i).length() <= tol)
      throw Error(ErrorCode::DegenerateDiagram, "consecutive vertices coincide at " + std::to_string(i));
  for (int i = 0; i < n; ++i) {
    // Adjacent sticks i and i+1 share a vertex; they must not fold back.
    Segment s = d.stick(i), t = d.stick((i + 1) % n);
    if (std::abs(side(s.a, s.b, t.b)) <= tol && dot(s.direction(), t.direction()) < 0)
      throw Error(ErrorCode::DegenerateDiagram, "adjacent sticks overlap at vertex " + std::to_string((i + 1) % n));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      Segment s = d.stick(i), t = d.stick(j);
      const double o1 = side(s.a, s.b, t.a), o2 = side(s.a, s.b, t.b);
      const double o3 = side(t.a, t.b, s.a), o4 = side(t.a, t.b, s.b);
      auto touches = [&](double o, PlanarPoint a, PlanarPoint b, PlanarPoint c) {
        if (std::abs(o) > tol) return false;
        double f = foot(a, b, c);
        double slack = tol / norm(b - a);
        return f >= -slack && f <= 1 + slack;
      };
      if (touches(o1, s.a, s.b, t.a) || touches(o2, s.a, s.b, t.b) || touches(o3, t.a, t.b, s.a) ||
          touches(o4, t.a, t.b, s.b))
        throw Error(ErrorCode::DegenerateDiagram,
                    "vertex lies on stick (sticks " + std::to_string(i) + ", " + std::to_string(j) + ")");
      if ((o1 > 0) == (o2 > 0) || (o3 > 0) == (o4 > 0)) continue;
      const double ts = o3 / (o3 - o4);
      const double tt = o1 / (o1 - o2);
      d.crossings.push_back({{i, j}, {ts, tt}, s.at(ts), std::nullopt});
    }
  reject_coincident_crossings(d.crossings, [](PlanarPoint a, PlanarPoint b) { return norm(a - b); }, tol);
  return d;
}

/// Finds every crossing of a closed chain of arcs. Arc junctions are not
/// crossings. Throws DisconnectedChain or DegenerateDiagram.
inline SphericalStickDiagram extract_crossings_spherical(const std::vector<GreatArc>& arcs) {
  const int n = static_cast<int>(arcs.size());
  if (n < 2) throw Error(ErrorCode::DegenerateDiagram, "a closed chain needs at least 2 arcs");
  for (int k = 0; k < n; ++k)
    if (angular_distance(arcs[k].end_point(), arcs[(k + 1) % n].start_point()) > kPositionTol)
      throw Error(ErrorCode::DisconnectedChain, "arc " + std::to_string(k) + " does not end where the next begins");
  SphericalStickDiagram d;
  d.arcs = arcs;
  // Junction j joins the end of arc j-1 to the start of arc j.
  auto is_junction = [&](int i, const ArcContainment& ci, int j, const ArcContainment& cj) {
    auto joined = [&](int a, ArcLocation la, int b, ArcLocation lb) {
      return la == ArcLocation::End && lb == ArcLocation::Start && (a + 1) % n == b;
    };
    return joined(i, ci.where, j, cj.where) || joined(j, cj.where, i, ci.where);
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto& a = arcs[i];
      const auto& b = arcs[j];
      Vec3 c = cross(a.circle().normal().vec(), b.circle().normal().vec());
      if (norm(c) < kPositionTol) {
        // Same great circle: allowed only if the arcs share at most endpoints.
        for (double t : {0.5 * b.length(), 1e-6, b.length() - 1e-6})
          if (a.contains(b.point_at_offset(t)).where == ArcLocation::Interior)
            throw Error(ErrorCode::DegenerateDiagram, "arcs on one circle overlap");
        for (double t : {0.5 * a.length(), 1e-6, a.length() - 1e-6})
          if (b.contains(a.point_at_offset(t)).where == ArcLocation::Interior)
            throw Error(ErrorCode::DegenerateDiagram, "arcs on one circle overlap");
        continue;
      }
      auto [p, q] = intersect_great_circles(a.circle(), b.circle());
      for (const SpherePoint& x : {p, q}) {
        ArcContainment ca = a.contains(x), cb = b.contains(x);
        const bool on_a = ca.where != ArcLocation::Outside;
        const bool on_b = cb.where != ArcLocation::Outside;
        if (!on_a || !on_b) continue;
        if (ca.where == ArcLocation::Interior && cb.where == ArcLocation::Interior) {
          d.crossings.push_back({{i, j},
                                 {a.offset_of_angle(a.circle().angle_of(x)), b.offset_of_angle(b.circle().angle_of(x))},
                                 x,
                                 std::nullopt});
          continue;
        }
        if (is_junction(i, ca, j, cb)) continue;
        throw Error(ErrorCode::DegenerateDiagram,
                    "arc endpoint lies on arc (arcs " + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  diagram_detail::reject_coincident_crossings(
      d.crossings, [](const SpherePoint& a, const SpherePoint& b) { return angular_distance(a, b); }, kPositionTol);
  return d;
}

namespace diagram_detail {

struct Passage {
  int crossing;
  bool over;
};

/// Crossings in traversal order, each visited twice.
template <class Diagram>
std::vector<Passage> traversal(const Diagram& d, int strands) {
  std::vector<Passage> events;
  for (int s = 0; s < strands; ++s) {
    std::vector<std::pair<double, int>> on;
    for (int c = 0; c < static_cast<int>(d.crossings.size()); ++c)
      if (d.crossings[c].involves(s)) on.push_back({d.crossings[c].offset_on(s), c});
    std::sort(on.begin(), on.end());
    for (auto [t, c] : on) {
      const auto& x = d.crossings[c];
      if (!x.over) throw Error(ErrorCode::MissingCrossingInfo, "crossing " + std::to_string(c) + " has no over-strand");
      if (*x.over != x.strands[0] && *x.over != x.strands[1])
        throw Error(ErrorCode::MissingCrossingInfo, "over-strand is not one of the crossing's strands");
      events.push_back({c, *x.over == s});
    }
  }
  return events;
}

/// Builds the PD code given, per crossing, whether the over-strand's outgoing
/// edge comes right after the incoming under-edge counterclockwise.
template <class Diagram, class OverOutNext>
PDCode assemble_pd(const Diagram& d, int strands, OverOutNext over_out_next) {
  auto events = traversal(d, strands);
  const int edges = static_cast<int>(events.size());
  PDCode pd;
  if (edges == 0) return pd;
  struct Labels {
    int u_in = 0, u_out = 0, o_in = 0, o_out = 0;
  };
  std::vector<Labels> lab(d.crossings.size());
  for (int k = 0; k < edges; ++k) {
    const int in = k + 1, out = k + 2 > edges ? 1 : k + 2;
    auto& l = lab[events[k].crossing];
    if (events[k].over) {
      l.o_in = in;
      l.o_out = out;
    } else {
      l.u_in = in;
      l.u_out = out;
    }
  }
  for (std::size_t c = 0; c < d.crossings.size(); ++c) {
    const auto& l = lab[c];
    if (over_out_next(d.crossings[c]))
      pd.crossings.push_back({l.u_in, l.o_out, l.u_out, l.o_in});
    else
      pd.crossings.push_back({l.u_in, l.o_in, l.u_out, l.o_out});
  }
  return pd;
}

}  // namespace diagram_detail

/// PD code of a planar diagram, traversed from vertex 0 along stick 0. The
/// edge arriving at the k-th crossing passage (1-based) is labeled k.
inline PDCode to_pd_code(const PlanarStickDiagram& d) {
  return diagram_detail::assemble_pd(d, d.stick_count(), [&](const PlanarCrossing& x) {
    const int u = x.strands[0] == *x.over ? x.strands[1] : x.strands[0];
    PlanarPoint tu = d.stick(u).direction(), to = d.stick(*x.over).direction();
    return cross(PlanarPoint{-tu.x, -tu.y}, to) > 0;
  });
}

/// PD code of a spherical diagram, with rotation measured around the outward
/// normal at each crossing (the sphere seen from outside).
inline PDCode to_pd_code(const SphericalStickDiagram& d) {
  return diagram_detail::assemble_pd(d, d.arc_count(), [&](const SphericalCrossing& x) {
    const int o = *x.over;
    const int u = x.other(o);
    Vec3 tu = d.arcs[u].tangent_at_offset(x.offset_on(u));
    Vec3 to = d.arcs[o].tangent_at_offset(x.offset_on(o));
    return dot(cross(-tu, to), x.point.vec()) > 0;
  });
}

template <class Diagram>
GaussCode to_gauss_code(const Diagram& d) {
  return to_gauss(to_pd_code(d));
}

/// Index of the crossing at `point` between the given strands, or -1.
template <class Point, class Dist>
int find_crossing(const std::vector<CrossingT<Point>>& xs, int s, int t, const Point& point, Dist dist,
                  double tol = 1e-7) {
  int best = -1;
  double best_d = tol;
  for (int c = 0; c < static_cast<int>(xs.size()); ++c) {
    if (!xs[c].involves(s) || !xs[c].involves(t)) continue;
    double dd = dist(xs[c].point, point);
    if (dd <= best_d) {
      best_d = dd;
      best = c;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Projections of polygonal knots

namespace diagram_detail {

inline double knot_scale(const PolygonalKnot3D& k) {
  double s = 1.0;
  for (auto v : k.vertices) s = std::max({s, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
  return s;
}

/// Parameter along segment ab of the point lying on the ray from c through x.
inline double ray_parameter(Vec3 a, Vec3 b, Vec3 c, Vec3 x) {
  Vec3 u = cross(a - c, x), w = cross(b - a, x);
  return -dot(u, w) / dot(w, w);
}

}  // namespace diagram_detail

/// Orthogonal projection onto the plane perpendicular to `direction`, viewed
/// from the +direction side: a larger height along the direction is over.
/// Edges parallel to the direction collapse to a point.
inline PlanarStickDiagram project_orthogonal(const PolygonalKnot3D& k, const SpherePoint& direction) {
  const int n = static_cast<int>(k.vertices.size());
  const Vec3 dir = direction.vec();
  auto [e1, e2] = orthonormal_frame(dir);
  const double tol = kPositionTol * diagram_detail::knot_scale(k);
  // 3D edge index carried by each surviving stick.
  std::vector<PlanarPoint> pts;
  std::vector<int> first_vertex;
  for (int i = 0; i < n; ++i) {
    Vec3 a = k.vertices[i], b = k.vertices[(i + 1) % n];
    Vec3 e = b - a;
    if (norm(e - dot(e, dir) * dir) <= tol) continue;  // collapses
    pts.push_back({dot(a, e1), dot(a, e2)});
    first_vertex.push_back(i);
  }
  PlanarStickDiagram d;
  try {
    d = extract_crossings_planar(pts);
  } catch (const Error& e) {
    throw Error(ErrorCode::DegenerateProjection, e.what());
  }
  // Collapsed edges have no shadow, so stick s is the shadow of 3D edge
  // first_vertex[s] alone and shares its parametrization.
  auto height = [&](int stick, double t) {
    const int i = first_vertex[stick];
    Vec3 a = k.vertices[i], b = k.vertices[(i + 1) % n];
    return dot(a + t * (b - a), dir);
  };
  for (auto& x : d.crossings) {
    const double h0 = height(x.strands[0], x.offsets[0]);
    const double h1 = height(x.strands[1], x.offsets[1]);
    if (std::abs(h0 - h1) <= tol) throw Error(ErrorCode::DegenerateProjection, "edges intersect in space");
    x.over = h0 > h1 ? x.strands[0] : x.strands[1];
  }
  return d;
}

/// Seeded search for a direction whose orthogonal projection is generic.
inline SpherePoint search_generic_direction(const PolygonalKnot3D& k, unsigned seed, int trials = 100) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int t = 0; t < trials; ++t) {
    SpherePoint dir(g(rng), g(rng), g(rng));
    try {
      project_orthogonal(k, dir);
      return dir;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateProjection) throw;
    }
  }
  throw Error(ErrorCode::DegenerateProjection, "no generic direction found");
}

/// Same as search_generic_direction, but perturbs `start` by random rotations
/// of growing size.
inline SpherePoint perturb_direction(const PolygonalKnot3D& k, const SpherePoint& start, unsigned seed,
                                     int trials = 100) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  double scale = 1e-6;
  for (int t = 0; t < trials; ++t, scale = std::min(0.3, scale * 1.5)) {
    SpherePoint dir(start.vec() + scale * Vec3{g(rng), g(rng), g(rng)});
    try {
      project_orthogonal(k, dir);
      return dir;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateProjection) throw;
    }
  }
  throw Error(ErrorCode::DegenerateProjection, "no generic direction near the given one");
}

/// Radial projection from `center` onto the unit sphere around it. Farther
/// from the center is over (the sphere seen from outside). If the center is a
/// vertex, its two edges vanish and the two loose arcs are extended to meet;
/// the extensions pass under everything they cross.
inline SphericalStickDiagram project_radial(const PolygonalKnot3D& k, const Vec3& center) {
  const int n = static_cast<int>(k.vertices.size());
  const double tol = kPositionTol * diagram_detail::knot_scale(k);
  int at_vertex = -1;
  for (int i = 0; i < n; ++i)
    if (norm(k.vertices[i] - center) <= tol) at_vertex = i;
  auto dir = [&](int i) {
    Vec3 v = k.vertices[((i % n) + n) % n] - center;
    if (norm(v) <= tol) throw Error(ErrorCode::DegenerateProjection, "center lies on the knot");
    return SpherePoint(v);
  };
  auto arc_of = [&](int i) {
    SpherePoint a = dir(i), b = dir(i + 1);
    if (norm(cross(a.vec(), b.vec())) <= kPositionTol)
      throw Error(ErrorCode::DegenerateProjection, "edge " + std::to_string(i) + " is radial");
    return GreatArc::shortest(a, b);
  };

  // edge[k] = 3D edge behind arc k.
  std::vector<GreatArc> arcs;
  std::vector<int> edge;
  // Arc offsets beyond which an arc is extension, per arc (start, end).
  std::vector<std::pair<double, double>> original;
  if (at_vertex < 0) {
    for (int i = 0; i < n; ++i) {
      arcs.push_back(arc_of(i));
      edge.push_back(i);
      original.push_back({0, arcs.back().length()});
    }
  } else {
    const int v = at_vertex;
    if (n - 2 < 2) throw Error(ErrorCode::DegenerateProjection, "too few edges left");
    for (int s = 1; s <= n - 2; ++s) {
      arcs.push_back(arc_of(v + s));
      edge.push_back((v + s) % n);
      original.push_back({0, arcs.back().length()});
    }
    // Extend the last arc forward and the first arc backward to a common point.
    GreatArc& first = arcs.front();
    GreatArc& last = arcs.back();
    Vec3 c = cross(first.circle().normal().vec(), last.circle().normal().vec());
    if (norm(c) <= kPositionTol) throw Error(ErrorCode::DegenerateProjection, "loose arcs share a great circle");
    auto [p, q] = intersect_great_circles(first.circle(), last.circle());
    double best = 1e9;
    double d_last = 0, d_first = 0;
    for (const SpherePoint& x : {p, q}) {
      const double fwd = normalize_angle(last.circle().angle_of(x) - last.end_angle());
      const double back = normalize_angle(first.start_angle() - first.circle().angle_of(x));
      if (fwd + back < best) {
        best = fwd + back;
        d_last = fwd;
        d_first = back;
      }
    }
    last = GreatArc(last.circle(), last.start_angle(), last.end_angle() + d_last);
    original.back() = {0, last.length() - d_last};
    first = GreatArc(first.circle(), first.start_angle() - d_first, first.end_angle());
    original.front() = {d_first, first.length()};
  }

  SphericalStickDiagram d;
  try {
    d = extract_crossings_spherical(arcs);
  } catch (const Error& e) {
    throw Error(ErrorCode::DegenerateProjection, e.what());
  }
  for (auto& x : d.crossings) {
    std::array<bool, 2> extension{};
    std::array<double, 2> dist{};
    for (int s = 0; s < 2; ++s) {
      const int a = x.strands[s];
      const double t = x.offsets[s];
      extension[s] = t < original[a].first - kPositionTol || t > original[a].second + kPositionTol;
      const int e = edge[a];
      Vec3 p0 = k.vertices[e], p1 = k.vertices[(e + 1) % n];
      const double u = diagram_detail::ray_parameter(p0, p1, center, x.point.vec());
      dist[s] = norm(p0 + u * (p1 - p0) - center);
    }
    if (extension[0] && extension[1])
      throw Error(ErrorCode::DegenerateProjection, "the two extensions cross each other");
    if (extension[0] || extension[1]) {
      x.over = extension[0] ? x.strands[1] : x.strands[0];
      continue;
    }
    if (std::abs(dist[0] - dist[1]) <= tol) throw Error(ErrorCode::DegenerateProjection, "edges meet in space");
    x.over = dist[0] > dist[1] ? x.strands[0] : x.strands[1];
  }
  return d;
}

}  // namespace stickknot
