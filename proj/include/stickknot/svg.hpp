#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stickknot/diagram.hpp"
#include "stickknot/error.hpp"
#include "stickknot/geom.hpp"

namespace stickknot {

struct RenderSpec {
  double size_px = 600;
  double margin_px = 24;
  double stroke_px = 2.5;
  /// Total width of the break in an under-strand.
  double gap_px = 12;
  /// Projection pole for spherical diagrams; the north pole if unset.
  std::optional<SpherePoint> pole;
};

struct RenderResult {
  std::string svg;
  /// Pole actually used (spherical diagrams only).
  std::optional<SpherePoint> pole;
  std::vector<std::string> warnings;
};

namespace svg_detail {

/// Fixed 9-significant-digit formatting so output bytes are stable.
inline std::string num(double x) {
  if (std::abs(x) < 5e-10) x = 0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

/// Maps plane coordinates (y up) into the SVG canvas (y down).
struct Viewport {
  double min_x = 0, min_y = 0, max_x = 1, max_y = 1;
  double scale = 1;
  double size = 600, margin = 24;
  double pad_x = 0, pad_y = 0;

  void fit(const std::vector<PlanarPoint>& pts, double size_px, double margin_px) {
    size = size_px;
    margin = margin_px;
    min_x = min_y = 1e300;
    max_x = max_y = -1e300;
    for (auto p : pts) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
    scale = (size - 2 * margin) / span;
    pad_x = 0.5 * (span - (max_x - min_x)) * scale;
    pad_y = 0.5 * (span - (max_y - min_y)) * scale;
  }
  double sx(PlanarPoint p) const { return margin + pad_x + (p.x - min_x) * scale; }
  double sy(PlanarPoint p) const { return size - margin - pad_y - (p.y - min_y) * scale; }
  std::string xy(PlanarPoint p) const { return num(sx(p)) + " " + num(sy(p)); }
};

inline std::string header(double size) {
  const std::string s = num(size);
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + s + "\" height=\"" + s +
         "\" viewBox=\"0 0 " + s + " " + s + "\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline std::string group_open(const RenderSpec& spec) {
  return "<g fill=\"none\" stroke=\"black\" stroke-width=\"" + num(spec.stroke_px) +
         "\" stroke-linecap=\"round\">\n";
}

/// Sub-intervals of [0, length] left after removing `half` around each cut.
inline std::vector<std::pair<double, double>> pieces(double length, std::vector<std::pair<double, double>> cuts) {
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> out;
  double at = 0;
  for (auto [center, half] : cuts) {
    const double lo = std::max(0.0, center - half), hi = std::min(length, center + half);
    if (lo > at) out.push_back({at, lo});
    at = std::max(at, hi);
  }
  if (at < length) out.push_back({at, length});
  return out;
}

/// Distance from a point to an arc (radians).
inline double distance_to_arc(const SpherePoint& p, const GreatArc& a) {
  const GreatCircle& c = a.circle();
  const Vec3 n = c.normal().vec();
  Vec3 in_plane = p.vec() - dot(p.vec(), n) * n;
  double best = std::min(angular_distance(p, a.start_point()), angular_distance(p, a.end_point()));
  if (norm(in_plane) > 1e-15) {
    SpherePoint foot(in_plane);
    if (a.contains(foot, 1e-6).where == ArcLocation::Interior) best = std::min(best, angular_distance(p, foot));
  }
  return best;
}

}  // namespace svg_detail

/// Planar diagram as line segments; under-strands are broken at crossings.
inline RenderResult render_svg(const PlanarStickDiagram& d, const RenderSpec& spec = {}) {
  using namespace svg_detail;
  Viewport vp;
  vp.fit(d.vertices, spec.size_px, spec.margin_px);
  std::string out = header(spec.size_px) + group_open(spec);
  for (int s = 0; s < d.stick_count(); ++s) {
    const Segment st = d.stick(s);
    const double len_px = st.length() * vp.scale;
    std::vector<std::pair<double, double>> cuts;
    for (const auto& x : d.crossings)
      if (x.involves(s) && x.over && *x.over != s) cuts.push_back({x.offset_on(s), 0.5 * spec.gap_px / len_px});
    for (auto [t0, t1] : pieces(1.0, cuts))
      out += "<line x1=\"" + num(vp.sx(st.at(t0))) + "\" y1=\"" + num(vp.sy(st.at(t0))) + "\" x2=\"" +
             num(vp.sx(st.at(t1))) + "\" y2=\"" + num(vp.sy(st.at(t1))) + "\"/>\n";
  }
  out += "</g>\n</svg>\n";
  return {out, std::nullopt, {}};
}

/// First pole at least 1e-6 from every arc, starting at `start` and nudging
/// by 1e-3 radians in a fixed sequence of directions.
inline SpherePoint choose_pole(const SphericalStickDiagram& d, const SpherePoint& start,
                               std::vector<std::string>* warnings = nullptr) {
  auto clear = [&](const SpherePoint& p) {
    for (const auto& a : d.arcs)
      if (svg_detail::distance_to_arc(p, a) < 1e-6) return false;
    return true;
  };
  if (clear(start)) return start;
  auto [e1, e2] = orthonormal_frame(start.vec());
  for (int k = 0; k < 32; ++k) {
    const double psi = kTwoPi * k / 8, r = 1e-3 * (1 + k / 8);
    SpherePoint p(start.vec() + r * (std::cos(psi) * e1 + std::sin(psi) * e2));
    if (clear(p)) {
      if (warnings) warnings->push_back("pole lies on the diagram; nudged by " + svg_detail::num(r) + " rad");
      return p;
    }
  }
  throw Error(ErrorCode::PoleOnDiagram, "no pole near the requested one avoids the diagram");
}

/// Spherical diagram drawn in its stereographic image: every arc is a true
/// circular arc (or a segment, for circles through the pole).
inline RenderResult render_svg(const SphericalStickDiagram& d, const RenderSpec& spec = {}) {
  using namespace svg_detail;
  RenderResult result;
  const SpherePoint pole = choose_pole(d, spec.pole.value_or(SpherePoint(0, 0, 1)), &result.warnings);
  result.pole = pole;
  const Stereographic proj(pole);

  std::vector<PlanarPoint> samples;
  for (const auto& a : d.arcs)
    for (int k = 0; k <= 64; ++k) samples.push_back(proj.project(a.point_at_offset(a.length() * k / 64)));
  Viewport vp;
  vp.fit(samples, spec.size_px, spec.margin_px);

  std::string out = header(spec.size_px) + group_open(spec);
  for (int i = 0; i < d.arc_count(); ++i) {
    const GreatArc& a = d.arcs[i];
    const CirclePlanarImage img = project_great_circle(a.circle(), pole);
    std::vector<std::pair<double, double>> cuts;
    for (const auto& x : d.crossings) {
      if (!x.involves(i) || !x.over || *x.over == i) continue;
      const double t = x.offset_on(i);
      const double speed = norm(proj.push_tangent(x.point, a.tangent_at_offset(t))) * vp.scale;
      cuts.push_back({t, 0.5 * spec.gap_px / speed});
    }
    for (auto [t0, t1] : pieces(a.length(), cuts)) {
      const PlanarPoint p = proj.project(a.point_at_offset(t0)), q = proj.project(a.point_at_offset(t1));
      if (img.is_line) {
        out += "<line x1=\"" + num(vp.sx(p)) + "\" y1=\"" + num(vp.sy(p)) + "\" x2=\"" + num(vp.sx(q)) +
               "\" y2=\"" + num(vp.sy(q)) + "\"/>\n";
        continue;
      }
      const PlanarPoint m = proj.project(a.point_at_offset(0.5 * (t0 + t1)));
      auto theta = [&](PlanarPoint z) { return std::atan2(z.y - img.center.y, z.x - img.center.x); };
      const double to_mid = normalize_angle(theta(m) - theta(p)), to_end = normalize_angle(theta(q) - theta(p));
      const bool ccw = to_mid < to_end;
      const double swept = ccw ? to_end : kTwoPi - to_end;
      const std::string r = num(img.radius * vp.scale);
      // Counterclockwise in the plane is counterclockwise on screen, which
      // is SVG's negative sweep.
      out += "<path d=\"M " + vp.xy(p) + " A " + r + " " + r + " 0 " + (swept > kPi ? "1" : "0") + " " +
             (ccw ? "0" : "1") + " " + vp.xy(q) + "\"/>\n";
    }
  }
  out += "</g>\n</svg>\n";
  result.svg = std::move(out);
  return result;
}

}  // namespace stickknot
