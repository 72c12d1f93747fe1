#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "stickknot/bounds.hpp"
#include "stickknot/bracket.hpp"
#include "stickknot/constructions.hpp"
#include "stickknot/diagram.hpp"
#include "stickknot/error.hpp"
#include "stickknot/geom.hpp"
#include "stickknot/identify.hpp"

namespace stickknot {

/// k great circles in general position with their 2 C(k,2) intersection
/// points, each circle's points sorted by angle.
class Arrangement {
 public:
  explicit Arrangement(int k, double tilt = kDefaultTilt) : scaffold_(check_k(k), tilt) {
    for (int m = 0; m < k; ++m)
      for (int n = m + 1; n < k; ++n) {
        SpherePoint x = scaffold_.vertex(m, n);
        vertices_.push_back({x, {m, n}});
        vertices_.push_back({x.antipode(), {m, n}});
      }
    on_circle_.resize(k);
    for (int v = 0; v < vertex_count(); ++v)
      for (int c : vertices_[v].circles) on_circle_[c].push_back(v);
    for (int c = 0; c < k; ++c)
      std::sort(on_circle_[c].begin(), on_circle_[c].end(), [&](int a, int b) {
        return circle(c).angle_of(vertices_[a].point) < circle(c).angle_of(vertices_[b].point);
      });
    validate();
  }

  struct Vertex {
    SpherePoint point;
    std::array<int, 2> circles;
  };

  int circle_count() const { return scaffold_.size(); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return circle_count() * 2 * (circle_count() - 1); }
  const GreatCircle& circle(int c) const { return scaffold_.circle(c); }
  const Vertex& vertex(int v) const { return vertices_[v]; }
  /// Vertex indices on circle c in counterclockwise order.
  const std::vector<int>& vertices_on(int c) const { return on_circle_[c]; }

  /// The two vertices where circles m and n meet.
  std::array<int, 2> meeting(int m, int n) const {
    std::array<int, 2> out{-1, -1};
    int found = 0;
    for (int v = 0; v < vertex_count(); ++v) {
      const auto& cs = vertices_[v].circles;
      if ((cs[0] == m && cs[1] == n) || (cs[0] == n && cs[1] == m)) out[found++] = v;
    }
    return out;
  }

  /// Face sizes of the arrangement, counted by walking each face boundary.
  std::map<int, int> face_sizes() const {
    // Each vertex has 4 outgoing directed edges (two per circle); a face is
    // traced by always turning to the next direction clockwise.
    struct Dart {
      int from, to, circle;
      bool forward;
    };
    std::vector<Dart> darts;
    for (int c = 0; c < circle_count(); ++c) {
      const auto& vs = on_circle_[c];
      const int n = static_cast<int>(vs.size());
      for (int i = 0; i < n; ++i) {
        darts.push_back({vs[i], vs[(i + 1) % n], c, true});
        darts.push_back({vs[(i + 1) % n], vs[i], c, false});
      }
    }
    auto direction = [&](const Dart& d) {
      const GreatCircle& c = circle(d.circle);
      Vec3 t = c.tangent_at(c.angle_of(vertices_[d.from].point));
      return d.forward ? t : -t;
    };
    // Next dart around a face: at the head vertex, take the outgoing dart
    // that is the first clockwise turn from the reverse of the incoming one.
    auto next = [&](int di) {
      const Dart& d = darts[di];
      const Vec3 at = vertices_[d.to].point.vec();
      Vec3 back;
      for (std::size_t k = 0; k < darts.size(); ++k)
        if (darts[k].from == d.to && darts[k].to == d.from && darts[k].circle == d.circle) back = direction(darts[k]);
      int best = -1;
      double best_angle = 10;
      for (std::size_t k = 0; k < darts.size(); ++k) {
        if (darts[k].from != d.to) continue;
        const Vec3 t = direction(darts[k]);
        double ang = std::atan2(dot(cross(t, back), at), dot(t, back));
        ang = normalize_angle(ang);
        if (ang < 1e-9) continue;
        if (ang < best_angle) {
          best_angle = ang;
          best = static_cast<int>(k);
        }
      }
      return best;
    };
    std::vector<bool> used(darts.size(), false);
    std::map<int, int> sizes;
    for (std::size_t s = 0; s < darts.size(); ++s) {
      if (used[s]) continue;
      int len = 0;
      for (int d = static_cast<int>(s); !used[d]; d = next(d)) {
        used[d] = true;
        ++len;
      }
      ++sizes[len];
    }
    return sizes;
  }

 private:
  static int check_k(int k) {
    if (k < 3) throw Error(ErrorCode::InvalidParams, "arrangement needs at least 3 circles");
    return k;
  }

  void validate() const {
    for (int a = 0; a < vertex_count(); ++a)
      for (int b = a + 1; b < vertex_count(); ++b)
        if (angular_distance(vertices_[a].point, vertices_[b].point) < 1e-6)
          throw Error(ErrorCode::DegenerateArrangement, "two arrangement vertices coincide");
    for (int c = 0; c < circle_count(); ++c)
      if (static_cast<int>(on_circle_[c].size()) != 2 * (circle_count() - 1))
        throw Error(ErrorCode::DegenerateArrangement, "circle has the wrong number of vertices");
  }

  CircleScaffold scaffold_;
  std::vector<Vertex> vertices_;
  std::vector<std::vector<int>> on_circle_;
};

/// A closed curve made of one arc from each circle: the circles in cyclic
/// order, the vertex where each consecutive pair hands over, and for each
/// circle which of the two arcs between its turning vertices is used.
struct LoopSpec {
  std::vector<int> order;
  /// turning[i] joins order[i] to order[i+1].
  std::vector<int> turning;
  /// Per position i: true takes the counterclockwise arc from the incoming
  /// turning vertex to the outgoing one, false the other.
  std::vector<bool> counterclockwise;

  LoopSpec complement() const {
    LoopSpec c = *this;
    for (std::size_t i = 0; i < c.counterclockwise.size(); ++i) c.counterclockwise[i] = !c.counterclockwise[i];
    return c;
  }

  friend bool operator==(const LoopSpec&, const LoopSpec&) = default;
  friend auto operator<=>(const LoopSpec&, const LoopSpec&) = default;
};

struct Loop {
  LoopSpec spec;
  SphericalStickDiagram diagram;
  /// Arrangement edges the loop runs along, and the count it leaves unused.
  int edges_used = 0;
  int complement_edges = 0;
};

namespace classifier_detail {

inline std::vector<std::vector<int>> cyclic_orders(int k) {
  // Circle 0 first; reversals collapse by requiring order[1] < order[k-1].
  std::vector<int> rest(k - 1);
  std::iota(rest.begin(), rest.end(), 1);
  std::vector<std::vector<int>> out;
  do {
    if (rest.front() > rest.back()) continue;
    std::vector<int> o{0};
    o.insert(o.end(), rest.begin(), rest.end());
    out.push_back(o);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

}  // namespace classifier_detail

/// Arc of circle c from vertex `from` to vertex `to`, in the chosen direction.
inline GreatArc loop_arc(const Arrangement& a, int c, int from, int to, bool counterclockwise) {
  const GreatCircle base = counterclockwise ? a.circle(c) : a.circle(c).reversed();
  return GreatArc::between(base, a.vertex(from).point, a.vertex(to).point);
}

/// Builds the loop's arcs and crossings, or nullopt if a circle's two
/// turning vertices coincide.
inline std::optional<Loop> build_loop(const Arrangement& a, const LoopSpec& s) {
  const int k = static_cast<int>(s.order.size());
  Loop loop;
  loop.spec = s;
  std::vector<GreatArc> arcs;
  for (int i = 0; i < k; ++i) {
    const int from = s.turning[(i + k - 1) % k], to = s.turning[i];
    if (from == to) return std::nullopt;
    const int c = s.order[i];
    GreatArc arc = loop_arc(a, c, from, to, s.counterclockwise[i]);
    for (int v : a.vertices_on(c))
      if (v == to || arc.contains(a.vertex(v).point).where == ArcLocation::Interior) ++loop.edges_used;
    arcs.push_back(arc);
  }
  loop.diagram = extract_crossings_spherical(arcs);
  loop.complement_edges = a.edge_count() - loop.edges_used;
  return loop;
}

/// Every loop with one arc on each circle: (k-1)!/2 cyclic orders, 2^k
/// turning-vertex choices, 2^k arc choices.
inline std::vector<Loop> enumerate_loops(const Arrangement& a) {
  const int k = a.circle_count();
  std::vector<Loop> out;
  for (const auto& order : classifier_detail::cyclic_orders(k))
    for (int turn_bits = 0; turn_bits < (1 << k); ++turn_bits)
      for (int arc_bits = 0; arc_bits < (1 << k); ++arc_bits) {
        LoopSpec s;
        s.order = order;
        for (int i = 0; i < k; ++i) {
          s.turning.push_back(a.meeting(order[i], order[(i + 1) % k])[(turn_bits >> i) & 1]);
          s.counterclockwise.push_back((arc_bits >> i) & 1);
        }
        if (auto loop = build_loop(a, s)) out.push_back(std::move(*loop));
      }
  return out;
}

/// Diagram with crossing c over-strand chosen by bit c of `mask` (set = lower
/// index over).
inline SphericalStickDiagram with_assignment(SphericalStickDiagram d, unsigned mask) {
  for (std::size_t c = 0; c < d.crossings.size(); ++c)
    d.crossings[c].over = ((mask >> c) & 1) ? d.crossings[c].strands[0] : d.crossings[c].strands[1];
  return d;
}

struct ClassifiedKnot {
  KnotId id;
  std::string label;
  /// Chiralities seen across all diagrams of this type.
  std::set<Chirality> chiralities;
  /// First diagram found, in enumeration order.
  std::size_t witness_loop = 0;
  unsigned witness_mask = 0;
  PDCode witness_pd;
  int diagrams = 0;
};

struct ClassificationReport {
  int circles = 0;
  std::size_t loops = 0;
  std::size_t diagrams = 0;
  std::size_t unknots = 0;
  std::size_t unidentified = 0;
  int max_crossings = 0;
  /// Complement edge count -> number of loops.
  std::map<int, int> complement_histogram;
  /// Crossing count -> number of loops.
  std::map<int, int> crossing_histogram;
  /// Loops breaking crossings <= 10 - ceil(n/2) (four circles only).
  int crossing_bound_violations = 0;
  /// Loops whose complement was not itself among the enumerated loops.
  int complement_failures = 0;
  /// Keyed by knot name (mirror images together).
  std::map<std::string, ClassifiedKnot> knots;

  std::set<std::string> labels() const {
    std::set<std::string> out;
    for (const auto& [name, k] : knots) out.insert(k.label);
    return out;
  }

  ClassificationFacts facts() const {
    ClassificationFacts f;
    f.circles = circles;
    for (const auto& [name, k] : knots) f.found.push_back({name, k.id.trefoil_counts()});
    return f;
  }
};

struct ClassifyOptions {
  int workers = 1;
  double tilt = kDefaultTilt;
  /// Loops with more crossings are counted but not identified.
  int max_crossings = 16;
};

namespace classifier_detail {

struct Partial {
  std::size_t diagrams = 0, unknots = 0, unidentified = 0;
  std::map<std::string, ClassifiedKnot> knots;
};

inline void merge(Partial& into, Partial&& from) {
  into.diagrams += from.diagrams;
  into.unknots += from.unknots;
  into.unidentified += from.unidentified;
  for (auto& [name, k] : from.knots) {
    auto it = into.knots.find(name);
    if (it == into.knots.end()) {
      into.knots.emplace(name, std::move(k));
      continue;
    }
    auto& have = it->second;
    have.chiralities.insert(k.chiralities.begin(), k.chiralities.end());
    have.diagrams += k.diagrams;
    if (std::pair{k.witness_loop, k.witness_mask} < std::pair{have.witness_loop, have.witness_mask}) {
      have.witness_loop = k.witness_loop;
      have.witness_mask = k.witness_mask;
      have.witness_pd = std::move(k.witness_pd);
      have.id = k.id;
      have.label = k.label;
    }
  }
}

inline Partial classify_range(const std::vector<Loop>& loops, std::size_t begin, std::size_t end,
                              const KnotUniverse& universe, const ClassifyOptions& opt) {
  Partial p;
  BracketOptions bopt;
  bopt.max_crossings = opt.max_crossings;
  for (std::size_t li = begin; li < end; ++li) {
    const auto& d = loops[li].diagram;
    const int c = static_cast<int>(d.crossings.size());
    if (c > opt.max_crossings) {
      p.unidentified += std::size_t{1} << c;
      p.diagrams += std::size_t{1} << c;
      continue;
    }
    for (unsigned mask = 0; mask < (1u << c); ++mask) {
      ++p.diagrams;
      PDCode pd = to_pd_code(with_assignment(d, mask));
      KnotId id;
      try {
        id = universe.identify_fingerprint(normalized_invariant(pd, bopt));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Unidentified) throw;
        ++p.unidentified;
        continue;
      }
      if (id.is_unknot()) {
        ++p.unknots;
        continue;
      }
      auto [it, fresh] = p.knots.try_emplace(id.name);
      auto& k = it->second;
      if (fresh) {
        k.id = id;
        k.label = id.label();
        k.witness_loop = li;
        k.witness_mask = mask;
        k.witness_pd = pd;
      }
      k.chiralities.insert(id.chirality);
      ++k.diagrams;
    }
  }
  return p;
}

}  // namespace classifier_detail

/// Enumerates every loop and every crossing assignment, identifies each
/// diagram, and collects the knot types. Results do not depend on the
/// worker count.
inline ClassificationReport classify(const Arrangement& a, const KnotUniverse& universe = KnotUniverse::standard(),
                                     const ClassifyOptions& opt = {}) {
  ClassificationReport r;
  r.circles = a.circle_count();
  const std::vector<Loop> loops = enumerate_loops(a);
  r.loops = loops.size();
  std::set<LoopSpec> specs;
  for (const auto& l : loops) specs.insert(l.spec);
  for (const auto& l : loops) {
    const int c = static_cast<int>(l.diagram.crossings.size());
    r.max_crossings = std::max(r.max_crossings, c);
    ++r.complement_histogram[l.complement_edges];
    ++r.crossing_histogram[c];
    if (r.circles == 4 && c > 10 - (l.complement_edges + 1) / 2) ++r.crossing_bound_violations;
    if (!specs.count(l.spec.complement())) ++r.complement_failures;
  }

  const int workers = std::max(1, opt.workers);
  std::vector<classifier_detail::Partial> parts(workers);
  const std::size_t chunk = (loops.size() + workers - 1) / workers;
  auto run = [&](int w) {
    const std::size_t begin = std::min(loops.size(), w * chunk), end = std::min(loops.size(), begin + chunk);
    parts[w] = classifier_detail::classify_range(loops, begin, end, universe, opt);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  classifier_detail::Partial all;
  for (auto& p : parts) classifier_detail::merge(all, std::move(p));
  r.diagrams = all.diagrams;
  r.unknots = all.unknots;
  r.unidentified = all.unidentified;
  r.knots = std::move(all.knots);
  return r;
}

inline ClassificationReport classify(int circles, const ClassifyOptions& opt = {}) {
  return classify(Arrangement(circles, opt.tilt), KnotUniverse::standard(), opt);
}

/// Expected nontrivial types for four circles, by label.
inline const std::set<std::string>& four_circle_types() {
  static const std::set<std::string> types{"3_1", "4_1", "5_1", "5_2", "6_1", "6_2",
                                           "6_3", "7_4", "8_18", "8_19", "8_20", "3_1#3_1*"};
  return types;
}

}  // namespace stickknot
