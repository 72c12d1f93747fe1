#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "stickknot/bracket.hpp"
#include "stickknot/diagram.hpp"
#include "stickknot/error.hpp"
#include "stickknot/geom.hpp"
#include "stickknot/knotbase.hpp"

namespace stickknot {

enum class Hand { Left, Right };

inline std::string to_string(Hand h) { return h == Hand::Left ? "left" : "right"; }
inline Hand opposite(Hand h) { return h == Hand::Left ? Hand::Right : Hand::Left; }

/// X of a single trefoil. The tabled trefoil is the right-handed one.
inline BracketPoly trefoil_fingerprint(Hand h) {
  const BracketPoly& right = KnotTable::bundled().at("3_1").fingerprint;
  return h == Hand::Right ? right : mirror(right);
}

inline void check_torus_params(int p, int q) {
  if (p < 2 || q <= p || std::gcd(p, q) != 1)
    throw Error(ErrorCode::InvalidParams, "torus knot needs 2 <= p < q with gcd(p, q) = 1");
}

/// Every crossing's over-strand flipped.
template <class Diagram>
Diagram mirrored(Diagram d) {
  for (auto& x : d.crossings)
    if (x.over) x.over = x.other(*x.over);
  return d;
}

// ---------------------------------------------------------------------------
// Rotations

/// Rotation of v about the unit axis by angle (right-hand rule).
inline Vec3 rotate(Vec3 v, Vec3 axis, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return c * v + s * cross(axis, v) + (1 - c) * dot(axis, v) * axis;
}

/// Rotation taking unit vector `from` to unit vector `to` about their common
/// normal; identity if they coincide.
struct Rotation {
  Vec3 axis{0, 0, 1};
  double angle = 0;

  static Rotation between(Vec3 from, Vec3 to) {
    Vec3 c = cross(from, to);
    const double s = norm(c);
    if (s < 1e-15) {
      if (dot(from, to) > 0) return {};
      auto [u, v] = orthonormal_frame(from);
      return {u, kPi};
    }
    return {c / s, std::atan2(s, dot(from, to))};
  }
  Vec3 operator()(Vec3 v) const { return angle == 0 ? v : rotate(v, axis, angle); }
  SpherePoint operator()(const SpherePoint& p) const { return SpherePoint((*this)(p.vec())); }
  GreatArc operator()(const GreatArc& a) const {
    GreatCircle c((*this)(a.circle().normal().vec()));
    return GreatArc(c, c.angle_of((*this)(a.start_point())), c.angle_of((*this)(a.end_point())));
  }
};

// ---------------------------------------------------------------------------
// Planar torus star

/// q sticks joining evenly spaced points z_n to z_{n+p}. Stick n passes over
/// at the crossings clockwise from its midpoint and under at the others.
inline PlanarStickDiagram torus_planar(int p, int q) {
  check_torus_params(p, q);
  if (2 * p >= q) throw Error(ErrorCode::InvalidParams, "the star construction needs 2p < q");
  auto z = [q](int n) {
    const double t = kTwoPi * (((n % q) + q) % q) / q;
    return PlanarPoint{std::cos(t), std::sin(t)};
  };
  std::vector<PlanarPoint> vertices;
  for (int k = 0; k < q; ++k) vertices.push_back(z(k * p));
  PlanarStickDiagram d = extract_crossings_planar(vertices);
  if (static_cast<int>(d.crossings.size()) != (p - 1) * q)
    throw Error(ErrorCode::DegenerateDiagram, "star has " + std::to_string(d.crossings.size()) + " crossings");
  for (auto& x : d.crossings) {
    std::array<bool, 2> clockwise{};
    for (int s = 0; s < 2; ++s) {
      Segment st = d.stick(x.strands[s]);
      PlanarPoint mid = 0.5 * (st.a + st.b);
      clockwise[s] = cross(mid, x.point - mid) < 0;
    }
    if (clockwise[0] == clockwise[1]) throw Error(ErrorCode::DegenerateDiagram, "star crossing rule is inconsistent");
    x.over = clockwise[0] ? x.strands[0] : x.strands[1];
  }
  return d;
}

// ---------------------------------------------------------------------------
// Great-circle scaffold

/// Tilt of the scaffold circles' normals from the north pole.
inline constexpr double kDefaultTilt = kPi / 5;

/// q great circles extending the sides of a regular spherical q-gon about
/// the north pole. Circle n's normal is tilted by `tilt` toward longitude
/// 2 pi n / q; its basepoint is the point closest to the north pole (the
/// farthest from the origin in the stereographic image from the north pole).
/// Indices are taken mod q.
class CircleScaffold {
 public:
  CircleScaffold(int q, double tilt = kDefaultTilt) : q_(q), tilt_(tilt) {
    if (q < 3) throw Error(ErrorCode::InvalidParams, "scaffold needs at least 3 circles");
    if (!(tilt > 1e-3 && tilt < kPi / 2 - 1e-3))
      throw Error(ErrorCode::DegenerateArrangement, "tilt must lie strictly between 0 and pi/2");
    const Vec3 north{0, 0, 1};
    for (int n = 0; n < q; ++n) {
      const double psi = kTwoPi * n / q;
      Vec3 normal{std::sin(tilt) * std::cos(psi), std::sin(tilt) * std::sin(psi), std::cos(tilt)};
      circles_.emplace_back(normal);
      bases_.emplace_back(north - std::cos(tilt) * circles_.back().normal().vec());
    }
    // Intersection points must be well separated.
    std::vector<SpherePoint> pts;
    for (int m = 0; m < q; ++m)
      for (int n = m + 1; n < q; ++n) {
        auto [a, b] = intersect_great_circles(circles_[m], circles_[n]);
        pts.push_back(a);
        pts.push_back(b);
      }
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        if (angular_distance(pts[i], pts[j]) < 1e-6)
          throw Error(ErrorCode::DegenerateArrangement, "three circles meet at one point");
  }

  int size() const { return q_; }
  double tilt() const { return tilt_; }
  int wrap(int n) const { return ((n % q_) + q_) % q_; }
  const GreatCircle& circle(int n) const { return circles_[wrap(n)]; }
  const SpherePoint& base(int n) const { return bases_[wrap(n)]; }

  /// Counterclockwise angle on circle n from its basepoint.
  double angle_from_base(int n, const SpherePoint& x) const {
    const GreatCircle& c = circle(n);
    return normalize_angle(c.angle_of(x) - c.angle_of(base(n)));
  }

  /// i_{m,n}: the intersection of circles m and n counterclockwise from m's
  /// basepoint and clockwise from n's.
  SpherePoint vertex(int m, int n) const {
    if (wrap(m) == wrap(n)) throw Error(ErrorCode::InvalidParams, "vertex needs two distinct circles");
    auto [a, b] = intersect_great_circles(circle(m), circle(n));
    const SpherePoint& x = angle_from_base(m, a) < kPi ? a : b;
    const double on_m = angle_from_base(m, x), on_n = angle_from_base(n, x);
    if (!(on_m > 1e-9 && on_m < kPi - 1e-9 && on_n > kPi + 1e-9 && on_n < kTwoPi - 1e-9))
      throw Error(ErrorCode::DegenerateArrangement,
                  "intersection of circles " + std::to_string(wrap(m)) + ", " + std::to_string(wrap(n)) +
                      " is not on opposite sides of the basepoints");
    return x;
  }

  /// Arc of circle r from `from` to `to` that passes through the antipode of
  /// r's basepoint and avoids the basepoint itself, traversed in either
  /// direction of the circle as needed.
  GreatArc arc_through_antipode(int r, const SpherePoint& from, const SpherePoint& to) const {
    const SpherePoint far = base(r).antipode();
    for (const GreatCircle& c : {circle(r), circle(r).reversed()}) {
      GreatArc a = GreatArc::between(c, from, to);
      if (a.contains(far).where == ArcLocation::Interior && a.contains(base(r)).where == ArcLocation::Outside)
        return a;
    }
    throw Error(ErrorCode::DegenerateArrangement, "no arc of circle " + std::to_string(wrap(r)) +
                                                      " passes the antipode and avoids the basepoint");
  }

 private:
  int q_;
  double tilt_;
  std::vector<GreatCircle> circles_;
  std::vector<SpherePoint> bases_;
};

// ---------------------------------------------------------------------------
// Spherical torus arcs

/// One arc a_n per scaffold circle, from i_{n,n-p} counterclockwise to
/// i_{n+p,n}, traversed a_0, a_p, a_2p, ... Arc a_m is over at the crossings
/// counterclockwise from its basepoint and under at those past the antipode.
inline SphericalStickDiagram torus_spherical(int p, int q, double tilt = kDefaultTilt) {
  check_torus_params(p, q);
  CircleScaffold s(q, tilt);
  std::vector<GreatArc> arcs;
  std::vector<int> circle_of;
  for (int k = 0; k < q; ++k) {
    const int n = s.wrap(k * p);
    arcs.push_back(GreatArc::between(s.circle(n), s.vertex(n, n - p), s.vertex(n + p, n)));
    circle_of.push_back(n);
  }
  SphericalStickDiagram d = extract_crossings_spherical(arcs);
  if (static_cast<int>(d.crossings.size()) != (p - 1) * q)
    throw Error(ErrorCode::DegenerateArrangement,
                "arc diagram has " + std::to_string(d.crossings.size()) + " crossings");
  for (auto& x : d.crossings) {
    std::array<bool, 2> near_base{};
    for (int k = 0; k < 2; ++k) near_base[k] = s.angle_from_base(circle_of[x.strands[k]], x.point) < kPi;
    if (near_base[0] == near_base[1])
      throw Error(ErrorCode::DegenerateArrangement, "arc crossing rule is inconsistent");
    x.over = near_base[0] ? x.strands[0] : x.strands[1];
  }
  return d;
}

// ---------------------------------------------------------------------------
// Adding a trefoil at a vertex

namespace construct_detail {

/// Matches the crossings of `after` against `before` by position, with
/// `index_map` translating old strand indices. Returns the indices in `after`
/// that are new, or nullopt if an old crossing moved or vanished.
inline std::optional<std::vector<int>> new_crossings(const SphericalStickDiagram& before,
                                                     const SphericalStickDiagram& after,
                                                     const std::function<int(int)>& index_map,
                                                     bool copy_over, SphericalStickDiagram& out) {
  std::vector<bool> matched(after.crossings.size(), false);
  out = after;
  for (const auto& x : before.crossings) {
    const int s = index_map(x.strands[0]), t = index_map(x.strands[1]);
    int c = find_crossing(
        after.crossings, s, t, x.point,
        [](const SpherePoint& a, const SpherePoint& b) { return angular_distance(a, b); }, 1e-7);
    if (c < 0 || matched[c]) return std::nullopt;
    matched[c] = true;
    if (copy_over && x.over) out.crossings[c].over = index_map(*x.over);
  }
  std::vector<int> fresh;
  for (std::size_t c = 0; c < matched.size(); ++c)
    if (!matched[c]) fresh.push_back(static_cast<int>(c));
  return fresh;
}

/// Sign (+1/-1) of each listed crossing in the PD code of `d`.
inline std::vector<int> crossing_signs(const SphericalStickDiagram& d, const std::vector<int>& which) {
  PDCode pd = to_pd_code(d);
  std::vector<int> out;
  for (int c : which) out.push_back(crossing_sign(pd.crossings[c], pd.edge_count()));
  return out;
}

}  // namespace construct_detail

/// Ties a trefoil of the given hand into the junction ending arc vertex-1
/// and starting arc `vertex`: both arcs are extended by eps past the vertex
/// and a two-arc detour joins the extensions. The extension of the incoming
/// arc, the detour, and the extension of the outgoing arc cross pairwise
/// once, with alternating over/under. eps is halved until the detour's
/// neighborhood is free of other strands.
inline SphericalStickDiagram add_trefoil_at_vertex(const SphericalStickDiagram& d, int vertex, Hand hand,
                                                   double eps = 0.05, int max_halvings = 40) {
  const int n = d.arc_count();
  if (vertex < 0 || vertex >= n) throw Error(ErrorCode::InvalidParams, "vertex index out of range");
  for (const auto& x : d.crossings)
    if (!x.over) throw Error(ErrorCode::MissingCrossingInfo, "diagram needs all crossings set");
  const int in = (vertex + n - 1) % n, out = vertex;
  const GreatArc& a = d.arcs[in];
  const GreatArc& b = d.arcs[out];
  const SpherePoint v = b.start_point();
  const Vec3 ta = a.tangent_at_offset(a.length()), tb = b.tangent_at_offset(0);
  // New arcs go in at position n (after the last arc) when vertex is 0.
  const int insert_at = vertex == 0 ? n : vertex;
  auto index_map = [&](int i) { return i < insert_at ? i : i + 2; };
  const int a_new = index_map(in), b_new = index_map(out);
  const int detour1 = insert_at, detour2 = insert_at + 1;
  const int sign = hand == Hand::Right ? 1 : -1;

  for (int attempt = 0; attempt <= max_halvings; ++attempt, eps *= 0.5) {
    if (eps >= a.length() || eps >= b.length() || a.length() + eps >= kTwoPi - 1e-6 ||
        b.length() + eps >= kTwoPi - 1e-6)
      continue;
    SphericalStickDiagram result;
    std::optional<std::vector<int>> fresh;
    try {
      GreatArc a_ext(a.circle(), a.start_angle(), a.end_angle() + eps);
      GreatArc b_ext(b.circle(), b.start_angle() - eps, b.end_angle());
      const SpherePoint r(v.vec() + eps * (tb - ta));
      std::vector<GreatArc> arcs = d.arcs;
      arcs[in] = a_ext;
      arcs[out] = b_ext;
      arcs.insert(arcs.begin() + insert_at,
                  {GreatArc::shortest(a_ext.end_point(), r), GreatArc::shortest(r, b_ext.start_point())});
      fresh = construct_detail::new_crossings(d, extract_crossings_spherical(arcs), index_map, true, result);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateDiagram && e.code() != ErrorCode::ParallelCircles) throw;
      continue;
    }
    if (!fresh || fresh->size() != 3) continue;
    // The three new crossings pair the extended arcs and the detour, all near v.
    std::set<std::pair<int, int>> pairs;
    bool local = true;
    for (int c : *fresh) {
      const auto& x = result.crossings[c];
      pairs.insert({x.strands[0], x.strands[1]});
      local = local && angular_distance(x.point, v) <= 4 * eps;
    }
    auto pair_of = [](int s, int t) { return std::pair{std::min(s, t), std::max(s, t)}; };
    if (!local || pairs != std::set{pair_of(a_new, b_new), pair_of(detour1, b_new), pair_of(detour2, a_new)})
      continue;
    // Alternate over/under along the traversal through the new crossings.
    std::vector<std::tuple<int, double, int>> passages;
    for (int c : *fresh)
      for (int s = 0; s < 2; ++s)
        passages.push_back({result.crossings[c].strands[s], result.crossings[c].offsets[s], c});
    std::sort(passages.begin(), passages.end());
    for (bool first_over : {true, false}) {
      bool over = first_over;
      for (auto [strand, t, c] : passages) {
        if (over) result.crossings[c].over = strand;
        over = !over;
      }
      auto signs = construct_detail::crossing_signs(result, *fresh);
      if (std::all_of(signs.begin(), signs.end(), [&](int s) { return s == sign; })) return result;
    }
    throw Error(ErrorCode::DegenerateDiagram, "inserted tangle is not a trefoil");
  }
  throw Error(ErrorCode::NoRoom, "no room for a trefoil at vertex " + std::to_string(vertex));
}

/// Tries each vertex in turn.
inline SphericalStickDiagram add_trefoil_anywhere(const SphericalStickDiagram& d, Hand hand, double eps = 0.05) {
  for (int v = 0; v < d.arc_count(); ++v) {
    try {
      return add_trefoil_at_vertex(d, v, hand, eps);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoRoom) throw;
    }
  }
  throw Error(ErrorCode::NoRoom, "no vertex has room for a trefoil");
}

// ---------------------------------------------------------------------------
// Trefoil sums on the scaffold

/// Inductive builder for sums of trefoils with nearly equal numbers of each
/// hand. After k steps it holds k+2 arcs, one on each circle -m..m+2 (k odd,
/// m = k/2 rounded down) or -m..m+1 (k even), every arc passing through the
/// antipode of its circle's basepoint. Odd k gives (m+1) trefoils of the base
/// hand and m of the other; even k gives m of each. Each step's conditions
/// are checked, and any crossing the step does not account for is an error.
class TrefoilSumBuilder {
 public:
  /// `max_steps` sizes the scaffold.
  explicit TrefoilSumBuilder(int max_steps, double tilt = kDefaultTilt)
      : scaffold_(2 * (std::max(max_steps, 1) / 2) + 5, tilt), max_steps_(std::max(max_steps, 1)) {
    const auto& s = scaffold_;
    order_ = {0, 1, 2};
    ends_[0] = {s.vertex(2, 0), s.vertex(0, 1)};
    ends_[1] = {s.vertex(0, 1), s.vertex(1, 2)};
    ends_[2] = {s.vertex(1, 2), s.vertex(2, 0)};
    // Cyclic over-pattern: 0 over 2, 2 over 1, 1 over 0.
    rebuild([](int x, int y, const SpherePoint&) -> int {
      if (std::min(x, y) == 0 && std::max(x, y) == 2) return 0;
      if (std::min(x, y) == 1 && std::max(x, y) == 2) return 2;
      return 1;
    });
    if (diagram_.crossings.size() != 3) throw Error(ErrorCode::DegenerateArrangement, "base diagram is not 3 crossings");
    // The base trefoil's hand fixes every later step's hand.
    const BracketPoly x = normalized_invariant(to_pd_code(diagram_));
    if (x == trefoil_fingerprint(Hand::Left))
      base_hand_ = Hand::Left;
    else if (x == trefoil_fingerprint(Hand::Right))
      base_hand_ = Hand::Right;
    else
      throw Error(ErrorCode::DegenerateArrangement, "base diagram is not a trefoil");
    count_[base_hand_] = 1;
    check_conditions();
  }

  int steps() const { return k_; }
  Hand base_hand() const { return base_hand_; }
  int count(Hand h) const { return count_.count(h) ? count_.at(h) : 0; }
  const SphericalStickDiagram& diagram() const { return diagram_; }
  /// Circle label of each arc in traversal order.
  const std::vector<int>& labels() const { return order_; }

  /// Expected X of the current diagram.
  BracketPoly expected_fingerprint() const {
    return trefoil_fingerprint(Hand::Left).pow(count(Hand::Left)) *
           trefoil_fingerprint(Hand::Right).pow(count(Hand::Right));
  }

  /// Advances k to k+1. When `verify` is set, the new diagram's invariant is
  /// compared with the expected sum (skipped above the crossing cap).
  void step(bool verify = true, const BracketOptions& opt = {}) {
    if (k_ >= max_steps_) throw Error(ErrorCode::InvalidParams, "scaffold too small for another step");
    const int m = k_ / 2;
    const bool odd = k_ % 2 == 1;
    // extended: last arc before the closing vertex; first: the arc after it.
    const int extended = odd ? m + 2 : m + 1;
    const int first = -m;
    const int added = odd ? -m - 1 : m + 2;
    const auto& s = scaffold_;
    const SpherePoint old_vertex = ends_.at(extended).second;
    const SpherePoint join_end = s.vertex(extended, added);
    const SpherePoint join_start = s.vertex(added, first);
    ends_[extended].second = join_end;
    ends_[first].first = join_start;
    ends_[added] = {join_end, join_start};
    auto pos = std::find(order_.begin(), order_.end(), extended);
    if (pos == order_.end() || order_[(pos - order_.begin() + 1) % order_.size()] != first)
      throw Error(ErrorCode::DegenerateArrangement, "closing vertex is not where the induction expects it");
    order_.insert(pos + 1, added);
    auto rule = [&](int x, int y, const SpherePoint& at) -> int {
      auto is = [&](int a, int b) { return (x == a && y == b) || (x == b && y == a); };
      if (is(extended, first)) {
        if (angular_distance(at, old_vertex) > 1e-7)
          throw Error(ErrorCode::DegenerateArrangement, "unexpected crossing between the extended arcs");
        return odd ? first : extended;
      }
      if (x == added || y == added) {
        const int other = x == added ? y : x;
        if (odd) return other == extended ? extended : added;
        return other == first ? first : added;
      }
      throw Error(ErrorCode::DegenerateArrangement, "step created an unexpected crossing between arcs " +
                                                        std::to_string(x) + " and " + std::to_string(y));
    };
    rebuild(rule);
    ++k_;
    count_[odd ? opposite(base_hand_) : base_hand_] += 1;
    check_conditions();
    if (verify && static_cast<int>(diagram_.crossings.size()) <= opt.max_crossings) {
      if (normalized_invariant(to_pd_code(diagram_), opt) != expected_fingerprint())
        throw Error(ErrorCode::DegenerateArrangement, "step " + std::to_string(k_) + " produced the wrong knot");
    }
  }

 private:
  /// Reassembles arcs from endpoints and sets crossings: old ones keep their
  /// over-strand, new ones ask `rule` (circle labels and position).
  template <class Rule>
  void rebuild(Rule rule) {
    std::vector<GreatArc> arcs;
    for (int label : order_) arcs.push_back(scaffold_.arc_through_antipode(label, ends_.at(label).first, ends_.at(label).second));
    SphericalStickDiagram d = extract_crossings_spherical(arcs);
    std::vector<std::pair<SpherePoint, int>> next;
    for (auto& x : d.crossings) {
      const int lx = order_[x.strands[0]], ly = order_[x.strands[1]];
      int over_label = 0;
      auto old = std::find_if(memory_.begin(), memory_.end(),
                              [&](const auto& e) { return angular_distance(e.first, x.point) < 1e-7; });
      if (old != memory_.end()) {
        over_label = old->second;
        if (over_label != lx && over_label != ly)
          throw Error(ErrorCode::DegenerateArrangement, "old crossing changed strands");
      } else {
        over_label = rule(lx, ly, x.point);
      }
      x.over = over_label == lx ? x.strands[0] : x.strands[1];
      next.push_back({x.point, over_label});
    }
    for (const auto& e : memory_)
      if (std::none_of(next.begin(), next.end(), [&](const auto& f) { return angular_distance(e.first, f.first) < 1e-7; }))
        throw Error(ErrorCode::DegenerateArrangement, "a crossing disappeared");
    memory_ = std::move(next);
    diagram_ = std::move(d);
  }

  /// Arc count, circle labels, antipode passage, and vertex set.
  void check_conditions() const {
    const int m = k_ / 2;
    const bool odd = k_ % 2 == 1;
    const int lo = -m, hi = odd ? m + 2 : m + 1;
    if (static_cast<int>(order_.size()) != k_ + 2) throw Error(ErrorCode::DegenerateArrangement, "wrong arc count");
    for (int i = 0; i < static_cast<int>(order_.size()); ++i) {
      if (order_[i] < lo || order_[i] > hi) throw Error(ErrorCode::DegenerateArrangement, "arc on an unexpected circle");
      const SpherePoint& end = ends_.at(order_[i]).second;
      const int next = order_[(i + 1) % order_.size()];
      // Vertices are i_{r,r+1}, plus the closing vertex.
      const bool consecutive = next == order_[i] + 1;
      const bool closing = order_[i] == hi && next == lo;
      if (!consecutive && !closing) throw Error(ErrorCode::DegenerateArrangement, "arcs out of order");
      if (angular_distance(end, scaffold_.vertex(order_[i], next)) > 1e-9)
        throw Error(ErrorCode::DegenerateArrangement, "vertex is not the expected intersection");
    }
  }

  CircleScaffold scaffold_;
  int max_steps_;
  int k_ = 1;
  Hand base_hand_ = Hand::Left;
  std::map<Hand, int> count_;
  std::vector<int> order_;
  std::map<int, std::pair<SpherePoint, SpherePoint>> ends_;
  std::vector<std::pair<SpherePoint, int>> memory_;
  SphericalStickDiagram diagram_;
};

/// Spherical diagram of `left` left-handed plus `right` right-handed
/// trefoils: 2m+2 arcs when both counts equal m, otherwise 2n+1 arcs with n
/// the larger count.
inline SphericalStickDiagram trefoil_composite(int left, int right, double tilt = kDefaultTilt,
                                               bool verify = true) {
  if (left < 0 || right < 0 || left + right < 1)
    throw Error(ErrorCode::InvalidParams, "need at least one trefoil and nonnegative counts");
  const int more = std::max(left, right), fewer = std::min(left, right);
  const int steps = more == fewer ? 2 * fewer : 2 * fewer + 1;
  TrefoilSumBuilder builder(steps, tilt);
  while (builder.steps() < steps) builder.step(verify);
  SphericalStickDiagram d = builder.diagram();
  const Hand major = builder.base_hand();
  for (int extra = more - fewer - 1; extra > 0; --extra) d = add_trefoil_anywhere(d, major);
  // The builder's majority hand is its base hand; flip if the request wants
  // the other one.
  const Hand wanted_major = left >= right ? Hand::Left : Hand::Right;
  if (more != fewer && wanted_major != major) d = mirrored(d);
  return d;
}

// ---------------------------------------------------------------------------
// Composition

namespace construct_detail {

struct PlanarPlacement {
  std::vector<PlanarPoint> vertices;
  std::vector<int> source;  // 0 = from a, 1 = from b, per stick portion
};

/// Linear map fixing `corner` with the two sticks at vertex i perpendicular,
/// orientation preserved.
inline std::vector<PlanarPoint> square_corner(const std::vector<PlanarPoint>& v, int i) {
  const int n = static_cast<int>(v.size());
  const PlanarPoint c = v[i];
  const PlanarPoint u = v[(i + n - 1) % n] - c, w = v[(i + 1) % n] - c;
  const double det = cross(u, w);
  const double s = det > 0 ? 1.0 : -1.0;
  // Columns: u -> (|u|, 0), w -> (0, s|w|); M = T * [u w]^-1.
  const double nu = norm(u), nw = norm(w);
  const double inv[2][2] = {{w.y / det, -w.x / det}, {-u.y / det, u.x / det}};
  const double t[2][2] = {{nu, 0}, {0, s * nw}};
  double m[2][2];
  for (int r = 0; r < 2; ++r)
    for (int k = 0; k < 2; ++k) m[r][k] = t[r][0] * inv[0][k] + t[r][1] * inv[1][k];
  std::vector<PlanarPoint> out;
  for (auto p : v) {
    PlanarPoint d = p - c;
    out.push_back(PlanarPoint{m[0][0] * d.x + m[0][1] * d.y, m[1][0] * d.x + m[1][1] * d.y} + c);
  }
  return out;
}

inline double diameter(const std::vector<PlanarPoint>& v) {
  double best = 0;
  for (auto p : v)
    for (auto q : v) best = std::max(best, norm(p - q));
  return best;
}

/// Turn at vertex i: sign of (ray back along the incoming stick) x (ray along the outgoing one).
inline int turn(const std::vector<PlanarPoint>& v, int i) {
  const int n = static_cast<int>(v.size());
  return cross(v[(i + n - 1) % n] - v[i], v[(i + 1) % n] - v[i]) > 0 ? 1 : -1;
}

}  // namespace construct_detail

/// Planar connected sum: corner i of a and corner j of b are squared by
/// linear maps, b is shrunk to a quarter of a's diameter and turned so each
/// of its corner sticks continues one of a's, and the two corners merge into
/// one crossing. The result has sticks(a) + sticks(b) - 2 sticks; a passes
/// over b everywhere. If no corner pair has compatible turns, b is
/// traversed in reverse, which is only faithful for invertible b.
inline PlanarStickDiagram compose_planar(const PlanarStickDiagram& a, const PlanarStickDiagram& b) {
  using namespace construct_detail;
  for (const auto* d : {&a, &b})
    for (const auto& x : d->crossings)
      if (!x.over) throw Error(ErrorCode::MissingCrossingInfo, "compose needs all crossings set");
  const int na = a.stick_count(), nb = b.stick_count();

  auto attempt = [&](const PlanarStickDiagram& bb, int i, int j) -> std::optional<PlanarStickDiagram> {
    std::vector<PlanarPoint> va = square_corner(a.vertices, i);
    std::vector<PlanarPoint> vb = square_corner(bb.vertices, j);
    const PlanarPoint v = va[i], w = vb[j];
    const PlanarPoint ra1 = va[(i + na - 1) % na] - v;
    const PlanarPoint rb2 = vb[(j + 1) % nb] - w;
    const double scale = 0.25 * diameter(va) / diameter(vb);
    // Rotate so rb2 points along -ra1.
    const double angle = std::atan2(-ra1.y, -ra1.x) - std::atan2(rb2.y, rb2.x);
    const double c = std::cos(angle), s = std::sin(angle);
    for (auto& p : vb) {
      PlanarPoint d = p - w;
      p = v + scale * PlanarPoint{c * d.x - s * d.y, s * d.x + c * d.y};
    }
    // a's vertices i+1 .. i-1, then b's j+1 .. j-1.
    std::vector<PlanarPoint> merged;
    for (int k = 1; k < na; ++k) merged.push_back(va[(i + k) % na]);
    for (int k = 1; k < nb; ++k) merged.push_back(vb[(j + k) % nb]);
    PlanarStickDiagram out;
    try {
      out = extract_crossings_planar(merged);
    } catch (const Error&) {
      return std::nullopt;
    }
    // Merged sticks: na-2 joins a's v_{i-1} to b's w_{j+1}; na+nb-3 joins
    // w_{j-1} back to v_{i+1}. Both pass through v.
    const int down = na - 2, up = na + nb - 3;
    auto portion_is_a = [&](int stick, double t) {
      if (stick < down) return true;
      if (stick > down && stick < up) return false;
      Segment sg = out.stick(stick);
      const double tv = dot(v - sg.a, sg.b - sg.a) / dot(sg.b - sg.a, sg.b - sg.a);
      return stick == down ? t < tv : t > tv;
    };
    // Original stick index of a portion, for copying old crossing data.
    auto a_index = [&](int stick, bool first_half) {
      if (stick == down) return (i + na - 1) % na;
      if (stick == up) return i;
      (void)first_half;
      return (i + 1 + stick) % na;
    };
    auto b_index = [&](int stick) {
      if (stick == down) return j;
      if (stick == up) return (j + nb - 1) % nb;
      return (j + 1 + (stick - (na - 1))) % nb;
    };
    int at_vertex = 0;
    std::size_t a_matched = 0, b_matched = 0;
    for (auto& x : out.crossings) {
      const int s0 = x.strands[0], s1 = x.strands[1];
      if ((s0 == down && s1 == up) || (s0 == up && s1 == down)) {
        if (norm(x.point - v) > 1e-9 * std::max(1.0, diameter(va))) return std::nullopt;
        x.over = down;
        ++at_vertex;
        continue;
      }
      const bool a0 = portion_is_a(s0, x.offsets[0]), a1 = portion_is_a(s1, x.offsets[1]);
      if (a0 != a1) {
        x.over = a0 ? s0 : s1;
        continue;
      }
      // Same source: copy the old decision.
      const auto& src = a0 ? a : bb;
      const int o0 = a0 ? a_index(s0, true) : b_index(s0);
      const int o1 = a0 ? a_index(s1, true) : b_index(s1);
      const auto* found = [&]() -> const PlanarCrossing* {
        for (const auto& y : src.crossings)
          if (y.involves(o0) && y.involves(o1)) return &y;
        return nullptr;
      }();
      if (!found) return std::nullopt;
      (a0 ? a_matched : b_matched)++;
      x.over = *found->over == o0 ? s0 : s1;
    }
    if (at_vertex != 1 || a_matched != a.crossings.size() || b_matched != bb.crossings.size()) return std::nullopt;
    return out;
  };

  auto search = [&](const PlanarStickDiagram& bb) -> std::optional<PlanarStickDiagram> {
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j) {
        if (turn(a.vertices, i) != -turn(bb.vertices, j)) continue;
        if (auto r = attempt(bb, i, j)) return r;
      }
    return std::nullopt;
  };
  if (auto r = search(b)) return *r;
  // Reverse b's traversal: vertex order reversed, stick k becomes nb-2-k.
  PlanarStickDiagram rb;
  rb.vertices.assign(b.vertices.rbegin(), b.vertices.rend());
  rb = extract_crossings_planar(rb.vertices);
  for (auto& x : rb.crossings)
    for (const auto& y : b.crossings) {
      const int s0 = (2 * nb - 2 - y.strands[0]) % nb, s1 = (2 * nb - 2 - y.strands[1]) % nb;
      if (x.involves(s0) && x.involves(s1) && norm(x.point - y.point) < 1e-9) {
        x.over = (2 * nb - 2 - *y.over) % nb;
      }
    }
  if (auto r = search(rb)) return *r;
  throw Error(ErrorCode::DegenerateDiagram, "no corner pair composes generically");
}

/// Spherical connected sum: b is rotated so one of its vertices sits just
/// beside a vertex of a, then the two junctions are rewired (a's incoming arc
/// continues into b's outgoing arc and vice versa). Arc count is the sum;
/// a passes over b everywhere. Placements are searched deterministically and
/// the one with fewest crossings is kept; every candidate is checked to keep
/// both diagrams' own crossings and to leave the rewired region clear.
inline SphericalStickDiagram compose_spherical(const SphericalStickDiagram& a, const SphericalStickDiagram& b,
                                               double offset = 0.02) {
  for (const auto* d : {&a, &b})
    for (const auto& x : d->crossings)
      if (!x.over) throw Error(ErrorCode::MissingCrossingInfo, "compose needs all crossings set");
  const int na = a.arc_count(), nb = b.arc_count();
  auto dist = [](const SpherePoint& p, const SpherePoint& q) { return angular_distance(p, q); };

  std::optional<SphericalStickDiagram> best;
  for (int va = 0; va < na; ++va) {
    const GreatArc& a1 = a.arcs[(va + na - 1) % na];
    const GreatArc& a2 = a.arcs[va];
    const SpherePoint v = a2.start_point();
    // Clearance: other arcs of a stay away from v.
    double clear = kPi;
    for (int k = 0; k < na; ++k) {
      if (k == va || k == (va + na - 1) % na) continue;
      const GreatArc& arc = a.arcs[k];
      for (double t = 0; t <= arc.length(); t += arc.length() / 200) clear = std::min(clear, dist(arc.point_at_offset(t), v));
    }
    for (int vb = 0; vb < nb; ++vb) {
      const SpherePoint w = b.arcs[vb].start_point();
      const Rotation to_v = Rotation::between(w.vec(), v.vec());
      for (int turn = 0; turn < 72; ++turn) {
        const double theta = kTwoPi * turn / 72;
        for (int dir = 0; dir < 8; ++dir) {
          for (double delta : {offset, offset / 4}) {
            if (delta * 8 > clear) continue;
            // Place b: move w to v, spin about v, then shift by delta.
            auto [e1, e2] = orthonormal_frame(v.vec());
            const double psi = kTwoPi * dir / 8;
            const Vec3 shift_dir = std::cos(psi) * e1 + std::sin(psi) * e2;
            const Vec3 shift_axis = normalized(cross(v.vec(), shift_dir));
            auto place = [&](Vec3 x) { return rotate(rotate(to_v(x), v.vec(), theta), shift_axis, delta); };
            auto place_arc = [&](const GreatArc& arc) {
              GreatCircle c(place(arc.circle().normal().vec()));
              return GreatArc(c, c.angle_of(SpherePoint(place(arc.start_point().vec()))),
                              c.angle_of(SpherePoint(place(arc.end_point().vec()))));
            };
            std::vector<GreatArc> bp;
            try {
              for (const auto& arc : b.arcs) bp.push_back(place_arc(arc));
            } catch (const Error&) {
              continue;
            }
            const int ib1 = (vb + nb - 1) % nb, ib2 = vb;
            // Junctions near v: a1's circle meets b2's, b1's meets a2's.
            auto near_meet = [&](const GreatCircle& c1, const GreatCircle& c2) -> std::optional<SpherePoint> {
              if (norm(cross(c1.normal().vec(), c2.normal().vec())) < 1e-6) return std::nullopt;
              auto [p, q] = intersect_great_circles(c1, c2);
              const SpherePoint& x = dist(p, v) < dist(q, v) ? p : q;
              if (dist(x, v) > 4 * delta) return std::nullopt;
              return x;
            };
            auto j1 = near_meet(a1.circle(), bp[ib2].circle());
            auto j2 = near_meet(bp[ib1].circle(), a2.circle());
            if (!j1 || !j2 || dist(*j1, *j2) < 1e-4 * delta) continue;
            std::vector<GreatArc> arcs;
            std::vector<int> from;  // 0 = a, 1 = b
            std::vector<int> original;
            try {
              for (int k = 0; k < na; ++k) {
                const int idx = (va + k) % na;
                GreatArc arc = a.arcs[idx];
                if (idx == va) arc = GreatArc(arc.circle(), arc.circle().angle_of(*j2), arc.end_angle());
                if (idx == (va + na - 1) % na) arc = GreatArc(arc.circle(), arc.start_angle(), arc.circle().angle_of(*j1));
                // A junction moved by more than a sliver means the arc wrapped.
                if (std::abs(arc.length() - a.arcs[idx].length()) > 8 * delta) throw Error(ErrorCode::DegenerateDiagram, "");
                arcs.push_back(arc);
                from.push_back(0);
                original.push_back(idx);
              }
              for (int k = 0; k < nb; ++k) {
                const int idx = (vb + k) % nb;
                GreatArc arc = bp[idx];
                if (idx == ib2) arc = GreatArc(arc.circle(), arc.circle().angle_of(*j1), arc.end_angle());
                if (idx == ib1) arc = GreatArc(arc.circle(), arc.start_angle(), arc.circle().angle_of(*j2));
                if (std::abs(arc.length() - bp[idx].length()) > 8 * delta) throw Error(ErrorCode::DegenerateDiagram, "");
                arcs.push_back(arc);
                from.push_back(1);
                original.push_back(idx);
              }
            } catch (const Error&) {
              continue;
            }
            // Rotate the list so a's arc 0 comes first.
            const int lead = (na - va) % na;
            std::rotate(arcs.begin(), arcs.begin() + lead, arcs.end());
            std::rotate(from.begin(), from.begin() + lead, from.end());
            std::rotate(original.begin(), original.begin() + lead, original.end());
            SphericalStickDiagram out;
            try {
              out = extract_crossings_spherical(arcs);
            } catch (const Error&) {
              continue;
            }
            if (best && out.crossings.size() >= best->crossings.size()) continue;
            // The segment j1 - j2 closing each summand must be crossed by nothing.
            bool ok = true;
            {
              GreatArc band = GreatArc::shortest(*j1, *j2);
              for (const auto& arc : arcs) {
                if (norm(cross(arc.circle().normal().vec(), band.circle().normal().vec())) < 1e-9) continue;
                auto [p, q] = intersect_great_circles(arc.circle(), band.circle());
                for (const SpherePoint& x : {p, q})
                  if (band.contains(x).where == ArcLocation::Interior && arc.contains(x).where == ArcLocation::Interior)
                    ok = false;
              }
            }
            if (!ok) continue;
            // Own crossings of a and b must reappear; cross pairs take a over.
            std::size_t a_seen = 0, b_seen = 0;
            for (auto& x : out.crossings) {
              const int s0 = x.strands[0], s1 = x.strands[1];
              if (from[s0] != from[s1]) {
                x.over = from[s0] == 0 ? s0 : s1;
                continue;
              }
              const auto& src = from[s0] == 0 ? a : b;
              const int o0 = original[s0], o1 = original[s1];
              const SphericalCrossing* match = nullptr;
              for (const auto& y : src.crossings) {
                if (!(y.involves(o0) && y.involves(o1))) continue;
                const SpherePoint yp = from[s0] == 0 ? y.point : SpherePoint(place(y.point.vec()));
                if (dist(yp, x.point) < 1e-7) match = &y;
              }
              if (!match) {
                ok = false;
                break;
              }
              (from[s0] == 0 ? a_seen : b_seen)++;
              x.over = original[s0] == *match->over ? s0 : s1;
            }
            if (!ok || a_seen != a.crossings.size() || b_seen != b.crossings.size()) continue;
            best = std::move(out);
          }
        }
      }
    }
  }
  if (!best) throw Error(ErrorCode::DegenerateDiagram, "no clear placement for the composition");
  return *best;
}

}  // namespace stickknot
