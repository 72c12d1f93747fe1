#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stickknot/error.hpp"
#include "stickknot/knotbase.hpp"

namespace stickknot {

/// One bound with where it came from.
struct BoundEntry {
  enum class Side { Lower, Upper };
  Side side = Side::Lower;
  int value = 0;
  std::string source;
  /// Whether the underlying inequality was strict before rounding to an integer.
  bool strict = false;
  std::string detail;
};

/// Integer interval with provenance. Either end may be open.
struct BoundInterval {
  std::optional<int> lower, upper;
  std::vector<BoundEntry> provenance;

  bool exact() const { return lower && upper && *lower == *upper; }
  bool complete() const { return lower && upper; }

  void add(BoundEntry e) {
    if (e.side == BoundEntry::Side::Lower)
      lower = lower ? std::max(*lower, e.value) : e.value;
    else
      upper = upper ? std::min(*upper, e.value) : e.value;
    provenance.push_back(std::move(e));
  }
};

struct BoundReport {
  KnotDescriptor knot;
  BoundInterval planar;
  BoundInterval spherical;
  /// Inputs that were missing, so some formula could not be applied.
  std::vector<std::string> missing;

  bool complete() const { return planar.complete() && spherical.complete(); }
};

/// Counts of sticks/arcs of diagrams actually built for the knot.
struct ConstructionCounts {
  std::optional<int> planar;
  std::optional<int> spherical;
};

/// Membership facts from the classification of diagrams with one arc on
/// each of `circles` great circles. `found` holds (name, trefoil counts)
/// pairs for the nontrivial knots seen; a knot absent from the list for k
/// circles needs more than k arcs.
struct ClassificationFacts {
  struct Entry {
    std::string name;
    std::optional<std::pair<int, int>> trefoils;
  };
  int circles = 0;
  std::vector<Entry> found;
};

/// Smallest n >= 3 with crossing <= n(n-3)/2.
inline int planar_crossing_lower(int crossing) {
  int n = 3;
  while (n * (n - 3) < 2 * crossing) ++n;
  return n;
}

/// Smallest n >= 2 with crossing <= n(n-2).
inline int spherical_crossing_lower(int crossing) {
  int n = 2;
  while (n * (n - 2) < crossing) ++n;
  return n;
}

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

/// Closed-form stick and arc counts of the constructions, without building them.
inline ConstructionCounts construction_formula_counts(const KnotDescriptor& d) {
  check_descriptor(d);
  ConstructionCounts c;
  if (d.kind == KnotDescriptor::Kind::Torus) {
    if (2 * d.p < d.q) c.planar = d.q;
    c.spherical = d.q;
  } else {
    const int more = std::max(d.left, d.right), fewer = std::min(d.left, d.right);
    c.spherical = more == fewer ? 2 * more + 2 : 2 * more + 1;
  }
  return c;
}

namespace bounds_detail {

inline bool classified_as(const ClassificationFacts& f, const KnotDescriptor& d, const std::string& torus_name) {
  for (const auto& e : f.found) {
    if (d.kind == KnotDescriptor::Kind::Torus) {
      if (e.name == torus_name) return true;
      if (d.p == 2 && d.q == 3 && e.trefoils && e.trefoils->first + e.trefoils->second == 1) return true;
    } else if (e.trefoils) {
      auto [l, r] = *e.trefoils;
      if ((l == d.left && r == d.right) || (l == d.right && r == d.left)) return true;
    }
  }
  return false;
}

/// Best spherical upper bound for a trefoil sum from composing smaller
/// trefoil sums, each at its construction count.
inline std::optional<int> trefoil_split_upper(const KnotDescriptor& d) {
  if (d.kind != KnotDescriptor::Kind::Trefoils || d.trefoil_count() < 2) return std::nullopt;
  std::optional<int> best;
  for (int l1 = 0; l1 <= d.left; ++l1)
    for (int r1 = 0; r1 <= d.right; ++r1) {
      const int l2 = d.left - l1, r2 = d.right - r1;
      if (l1 + r1 == 0 || l2 + r2 == 0) continue;
      const int total = *construction_formula_counts(KnotDescriptor::trefoils(l1, r1)).spherical +
                        *construction_formula_counts(KnotDescriptor::trefoils(l2, r2)).spherical;
      best = best ? std::min(*best, total) : total;
    }
  return best;
}

}  // namespace bounds_detail

/// Applies every bound formula whose inputs are known. `torus_name` is the
/// table name of a torus knot when it has one (for matching classification
/// facts); facts may list classifications for several circle counts.
inline BoundReport compute_bounds(const KnotDescriptor& d, const ConstructionCounts& built = {},
                                  const std::vector<ClassificationFacts>& facts = {},
                                  const std::string& torus_name = {}) {
  using Side = BoundEntry::Side;
  const KnownValues v = known_values(d);
  BoundReport r;
  r.knot = d;
  auto& pl = r.planar;
  auto& sps = r.spherical;

  // Planar.
  if (v.crossing)
    pl.add({Side::Lower, planar_crossing_lower(*v.crossing), "crossing-number", false,
            "each stick crosses at most n-3 others"});
  else
    r.missing.push_back("crossing number");
  if (v.bridge)
    pl.add({Side::Lower, 2 * *v.bridge + 1, "bridge-index", true, "2 br < pl"});
  else
    r.missing.push_back("bridge index");
  if (v.stick)
    pl.add({Side::Upper, *v.stick - 1, "stick-index", false, "project along one stick"});
  else
    r.missing.push_back("stick index");
  if (built.planar) pl.add({Side::Upper, *built.planar, "construction", false, "planar diagram built"});
  if (d.kind == KnotDescriptor::Kind::Trefoils && d.trefoil_count() >= 2) {
    // Split off one trefoil: pl[K1#K2] <= pl1 + pl2 - 2 with pl[trefoil] = 5.
    const int rest = d.trefoil_count() - 1;
    const int rest_upper = 2 * rest + 4 - 1;
    pl.add({Side::Upper, 5 + rest_upper - 2, "composition", false, "corners joined at right angles"});
  }

  // Spherical.
  if (v.crossing)
    sps.add({Side::Lower, spherical_crossing_lower(*v.crossing), "crossing-number", false,
             "each arc crosses at most 2n-4 others"});
  if (v.superbridge)
    sps.add({Side::Lower, ceil_div(2 * *v.superbridge + 1, 3), "superbridge-index", false, "(2 sbr + 1)/3 <= sps"});
  else
    r.missing.push_back("superbridge index");
  if (v.bridge) sps.add({Side::Lower, ceil_div(2 * *v.bridge + 3, 3), "bridge-index", false, "(2/3) br + 1 <= sps"});
  if (v.stick) sps.add({Side::Upper, *v.stick - 2, "stick-index", false, "radial projection from a vertex"});
  if (pl.upper) sps.add({Side::Upper, *pl.upper, "planar-upper", false, "sps <= pl"});
  if (built.spherical) sps.add({Side::Upper, *built.spherical, "construction", false, "spherical diagram built"});
  if (auto split = bounds_detail::trefoil_split_upper(d))
    sps.add({Side::Upper, *split, "composition", false, "two diagrams joined at a vertex"});
  for (const auto& f : facts) {
    if (bounds_detail::classified_as(f, d, torus_name))
      sps.add({Side::Upper, f.circles, "classification", false,
               "found among diagrams on " + std::to_string(f.circles) + " circles"});
    else
      sps.add({Side::Lower, f.circles + 1, "classification", false,
               "absent from diagrams on " + std::to_string(f.circles) + " circles"});
  }
  if (pl.lower && pl.upper && *pl.lower > *pl.upper)
    throw Error(ErrorCode::InvalidParams, "planar bounds are inconsistent for " + d.to_string());
  if (sps.lower && sps.upper && *sps.lower > *sps.upper)
    throw Error(ErrorCode::InvalidParams, "spherical bounds are inconsistent for " + d.to_string());
  return r;
}

/// Throws InsufficientData if either interval is open.
inline const BoundReport& require_complete(const BoundReport& r) {
  if (!r.complete()) {
    std::string what = "bounds for " + r.knot.to_string() + " are open";
    for (const auto& m : r.missing) what += "; no " + m;
    throw Error(ErrorCode::InsufficientData, what);
  }
  return r;
}

}  // namespace stickknot
