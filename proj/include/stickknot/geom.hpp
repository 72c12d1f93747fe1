#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "stickknot/error.hpp"

namespace stickknot {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Positional coincidence tolerance shared by all combinatorial decisions.
inline constexpr double kPositionTol = 1e-9;
inline constexpr double kOrthoTol = 1e-12;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return s * a; }
  friend Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) { return a / norm(a); }

/// Unit vector on S^2. Renormalized on construction unless already unit
/// length to rounding, so serialized points read back bit-identical.
class SpherePoint {
 public:
  SpherePoint() : v_{0, 0, 1} {}
  explicit SpherePoint(Vec3 v) : v_(std::abs(dot(v, v) - 1.0) <= 1e-15 ? v : normalized(v)) {}
  SpherePoint(double x, double y, double z) : SpherePoint(Vec3{x, y, z}) {}

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }

  SpherePoint antipode() const { return SpherePoint(-v_); }

  friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

 private:
  Vec3 v_;
};

inline double angular_distance(const SpherePoint& a, const SpherePoint& b) {
  return std::atan2(norm(cross(a.vec(), b.vec())), dot(a.vec(), b.vec()));
}

inline double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

/// Right-handed orthonormal frame (u, v) with u x v = n. Deterministic: the
/// reference axis is the coordinate axis least aligned with n, so n = e_z
/// yields (e_x, e_y).
inline std::pair<Vec3, Vec3> orthonormal_frame(Vec3 n) {
  n = normalized(n);
  const std::array<Vec3, 3> axes{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(dot(axes[i], n)) < std::abs(dot(axes[best], n)) - 1e-15) best = i;
  Vec3 u = normalized(axes[best] - dot(axes[best], n) * n);
  Vec3 v = cross(n, u);
  return {u, v};
}

/// Great circle = unit sphere cut by the plane through the origin with the
/// given normal. The angular coordinate phi increases counterclockwise about
/// the normal (right-hand rule). Seen in a stereographic image from pole P the
/// circle runs counterclockwise iff normal . P > 0.
class GreatCircle {
 public:
  GreatCircle() : GreatCircle(Vec3{0, 0, 1}) {}
  explicit GreatCircle(Vec3 normal) : normal_(normal) {
    auto [u, v] = orthonormal_frame(normal_.vec());
    u_ = u;
    v_ = v;
  }
  explicit GreatCircle(const SpherePoint& normal) : GreatCircle(normal.vec()) {}

  /// Circle through a and b oriented so the short arc a -> b is positive.
  static GreatCircle through(const SpherePoint& a, const SpherePoint& b) {
    Vec3 n = cross(a.vec(), b.vec());
    if (norm(n) < kPositionTol)
      throw Error(ErrorCode::ParallelCircles, "points are coincident or antipodal");
    return GreatCircle(n);
  }

  const SpherePoint& normal() const { return normal_; }
  const Vec3& u() const { return u_; }
  const Vec3& v() const { return v_; }

  SpherePoint point_at(double phi) const {
    return SpherePoint(std::cos(phi) * u_ + std::sin(phi) * v_);
  }
  Vec3 tangent_at(double phi) const { return -std::sin(phi) * u_ + std::cos(phi) * v_; }
  double angle_of(const SpherePoint& p) const {
    return normalize_angle(std::atan2(dot(p.vec(), v_), dot(p.vec(), u_)));
  }
  /// Signed distance of p from the circle's plane.
  double offset(const SpherePoint& p) const { return dot(p.vec(), normal_.vec()); }
  bool contains(const SpherePoint& p, double tol = kPositionTol) const {
    return std::abs(offset(p)) <= tol;
  }
  GreatCircle reversed() const { return GreatCircle(-normal_.vec()); }
  bool is_counterclockwise_from(const SpherePoint& pole) const {
    return dot(normal_.vec(), pole.vec()) > 0;
  }

 private:
  SpherePoint normal_;
  Vec3 u_, v_;
};

/// Both intersection points of two distinct great circles: +-(n_a x n_b)/|.|.
inline std::pair<SpherePoint, SpherePoint> intersect_great_circles(const GreatCircle& a,
                                                                   const GreatCircle& b) {
  Vec3 c = cross(a.normal().vec(), b.normal().vec());
  if (norm(c) < kPositionTol)
    throw Error(ErrorCode::ParallelCircles, "great circles coincide");
  SpherePoint p(c);
  return {p, p.antipode()};
}

enum class ArcLocation { Outside, Start, Interior, End };

struct ArcContainment {
  bool on_arc = false;  // angle in [start, end)
  ArcLocation where = ArcLocation::Outside;
  bool at_endpoint() const { return where == ArcLocation::Start || where == ArcLocation::End; }
};

/// Arc of a great circle running counterclockwise from start_angle to
/// end_angle. Angles are stored in [0, 2pi); wrap-around is first class.
class GreatArc {
 public:
  GreatArc() = default;
  GreatArc(GreatCircle circle, double start_angle, double end_angle)
      : circle_(std::move(circle)),
        start_(normalize_angle(start_angle)),
        end_(normalize_angle(end_angle)) {
    double len = length();
    if (!(len > kPositionTol && len < kTwoPi - kPositionTol))
      throw Error(ErrorCode::DegenerateDiagram, "arc length must lie in (0, 2pi)");
  }

  /// Arc on `circle` from point a counterclockwise to point b.
  static GreatArc between(const GreatCircle& circle, const SpherePoint& a, const SpherePoint& b) {
    if (!circle.contains(a) || !circle.contains(b))
      throw Error(ErrorCode::NotOnCircle, "arc endpoints must lie on the circle");
    return GreatArc(circle, circle.angle_of(a), circle.angle_of(b));
  }

  /// Short arc from a to b (length < pi).
  static GreatArc shortest(const SpherePoint& a, const SpherePoint& b) {
    GreatCircle c = GreatCircle::through(a, b);
    return GreatArc(c, c.angle_of(a), c.angle_of(b));
  }

  const GreatCircle& circle() const { return circle_; }
  double start_angle() const { return start_; }
  double end_angle() const { return end_; }
  double length() const {
    double l = end_ - start_;
    return l <= 0 ? l + kTwoPi : l;
  }
  /// Offset of angle phi from the arc start measured counterclockwise.
  double offset_of_angle(double phi) const { return normalize_angle(phi - start_); }
  double angle_at_offset(double t) const { return normalize_angle(start_ + t); }

  SpherePoint start_point() const { return circle_.point_at(start_); }
  SpherePoint end_point() const { return circle_.point_at(end_); }
  SpherePoint point_at_offset(double t) const { return circle_.point_at(start_ + t); }
  /// Unit tangent in the direction of travel.
  Vec3 tangent_at_offset(double t) const { return circle_.tangent_at(start_ + t); }

  ArcContainment contains(const SpherePoint& p, double tol = kPositionTol) const {
    if (!circle_.contains(p, tol))
      throw Error(ErrorCode::NotOnCircle, "point is not on the arc's circle");
    return locate_angle(circle_.angle_of(p), tol);
  }

  ArcContainment locate_angle(double phi, double tol = kPositionTol) const {
    double t = offset_of_angle(phi);
    double len = length();
    if (t <= tol || t >= kTwoPi - tol) return {true, ArcLocation::Start};
    if (std::abs(t - len) <= tol) return {false, ArcLocation::End};
    if (t < len) return {true, ArcLocation::Interior};
    return {false, ArcLocation::Outside};
  }

  /// Same point set, opposite direction of travel.
  GreatArc reversed() const {
    GreatCircle r = circle_.reversed();
    return GreatArc(r, r.angle_of(end_point()), r.angle_of(start_point()));
  }

 private:
  GreatCircle circle_;
  double start_ = 0, end_ = kPi;
};

struct PlanarPoint {
  double x = 0, y = 0;

  friend PlanarPoint operator+(PlanarPoint a, PlanarPoint b) { return {a.x + b.x, a.y + b.y}; }
  friend PlanarPoint operator-(PlanarPoint a, PlanarPoint b) { return {a.x - b.x, a.y - b.y}; }
  friend PlanarPoint operator*(double s, PlanarPoint a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const PlanarPoint&, const PlanarPoint&) = default;
};

inline double dot(PlanarPoint a, PlanarPoint b) { return a.x * b.x + a.y * b.y; }
inline double cross(PlanarPoint a, PlanarPoint b) { return a.x * b.y - a.y * b.x; }
inline double norm(PlanarPoint a) { return std::hypot(a.x, a.y); }

struct Segment {
  PlanarPoint a, b;
  PlanarPoint direction() const { return b - a; }
  double length() const { return norm(b - a); }
  PlanarPoint at(double t) const { return a + t * (b - a); }
};

/// Stereographic projection from `pole` onto the plane through the origin
/// perpendicular to it. The image plane basis (e1, e2) satisfies
/// e1 x e2 = pole, so the pole e_z gives the usual (x, y) coordinates.
class Stereographic {
 public:
  Stereographic() : Stereographic(SpherePoint(0, 0, 1)) {}
  explicit Stereographic(const SpherePoint& pole) : pole_(pole) {
    auto [e1, e2] = orthonormal_frame(pole.vec());
    e1_ = e1;
    e2_ = e2;
  }

  const SpherePoint& pole() const { return pole_; }

  PlanarPoint project(const SpherePoint& p) const {
    if (angular_distance(p, pole_) <= kPositionTol)
      throw Error(ErrorCode::AtPole, "cannot project the projection pole");
    double s = 1.0 - dot(p.vec(), pole_.vec());
    return {dot(p.vec(), e1_) / s, dot(p.vec(), e2_) / s};
  }

  SpherePoint unproject(PlanarPoint w) const {
    double r2 = w.x * w.x + w.y * w.y;
    Vec3 v = (2 * w.x) * e1_ + (2 * w.y) * e2_ + (r2 - 1) * pole_.vec();
    return SpherePoint(v / (r2 + 1));
  }

  /// Image of a tangent vector at p under the differential of the projection.
  PlanarPoint push_tangent(const SpherePoint& p, Vec3 t) const {
    double s = 1.0 - dot(p.vec(), pole_.vec());
    double ds = -dot(t, pole_.vec());
    double a = dot(p.vec(), e1_), b = dot(p.vec(), e2_);
    return {(dot(t, e1_) * s - a * ds) / (s * s), (dot(t, e2_) * s - b * ds) / (s * s)};
  }

 private:
  SpherePoint pole_;
  Vec3 e1_, e2_;
};

inline PlanarPoint stereographic_project(const SpherePoint& p, const SpherePoint& pole) {
  return Stereographic(pole).project(p);
}
inline SpherePoint stereographic_unproject(PlanarPoint w, const SpherePoint& pole) {
  return Stereographic(pole).unproject(w);
}

/// Planar image of a great circle: a circle whose diameter through the origin
/// has endpoints p, q with |p||q| = 1, or a line through the origin when the
/// circle passes through the pole.
struct CirclePlanarImage {
  bool is_line = false;
  PlanarPoint center;
  double radius = 0;
  PlanarPoint p, q;          // diameter endpoints (circle case)
  PlanarPoint direction;     // unit direction (line case)
};

inline CirclePlanarImage project_great_circle(const GreatCircle& c, const SpherePoint& pole) {
  Stereographic proj(pole);
  const Vec3& n = c.normal().vec();
  double np = dot(n, pole.vec());
  CirclePlanarImage img;
  if (std::abs(np) <= kPositionTol) {
    img.is_line = true;
    Vec3 along = cross(n, pole.vec());
    PlanarPoint d = proj.push_tangent(SpherePoint(-pole.vec()), along);
    img.direction = (1.0 / norm(d)) * d;
    return img;
  }
  // The great circle through the pole and the normal meets c at +-w; their
  // images are the diameter endpoints through the origin.
  Vec3 toward = pole.vec() - np * n;
  if (norm(toward) <= kPositionTol) toward = c.u();  // circle centered on the origin
  SpherePoint w(toward);
  img.p = proj.project(w);
  img.q = proj.project(w.antipode());
  img.center = 0.5 * (img.p + img.q);
  img.radius = 0.5 * norm(img.p - img.q);
  return img;
}

}  // namespace stickknot
