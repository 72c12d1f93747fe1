// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "stickknot/stickknot.hpp"

using namespace stickknot;

namespace {

/// Collects failure notes for one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

BracketPoly invariant(const PDCode& pd, int cap = 30) {
  BracketOptions opt;
  opt.max_crossings = cap;
  return normalized_invariant(pd, opt);
}

bool is_torus(const PDCode& pd, int p, int q) {
  const BracketPoly x = invariant(pd), t = oracle::torus_jones(p, q);
  return x == t || x == mirror(t);
}

bool closed_chain(const SphericalStickDiagram& d) {
  for (int i = 0; i < d.arc_count(); ++i)
    if (angular_distance(d.arcs[i].end_point(), d.arcs[(i + 1) % d.arc_count()].start_point()) > 1e-9) return false;
  return true;
}

const std::vector<ClassificationFacts>& facts() {
  static const std::vector<ClassificationFacts> f{classify(3).facts(), classify(4).facts()};
  return f;
}

std::string torus_name_of(const KnotDescriptor& d) {
  return d.kind == KnotDescriptor::Kind::Torus ? KnotUniverse::standard().torus_name(d.p, d.q) : "";
}

BoundReport full_bounds(const KnotDescriptor& d, const ConstructionCounts& built) {
  return compute_bounds(d, built, facts(), torus_name_of(d));
}

std::string interval(const BoundInterval& b) {
  auto end = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string("?"); };
  return "[" + end(b.lower) + "," + end(b.upper) + "]";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Four-circle classification.
void classification(Check& c) {
  auto t0 = std::chrono::steady_clock::now();
  ClassificationReport one = classify(4);
  const double serial = seconds_since(t0);
  ClassifyOptions opt;
  opt.workers = 8;
  t0 = std::chrono::steady_clock::now();
  ClassificationReport eight = classify(Arrangement(4), KnotUniverse::standard(), opt);
  const double parallel = seconds_since(t0);
  c.expect(one.labels() == four_circle_types(), "found set differs from the expected 12 types");
  c.expect(!one.labels().count("3_1#3_1"), "granny knot found");
  c.expect(one.unidentified == 0, std::to_string(one.unidentified) + " unidentified diagrams");
  c.expect(eight.labels() == one.labels() && eight.diagrams == one.diagrams, "8-worker run differs");
  c.expect(serial < 60, "serial run took " + std::to_string(serial) + " s");
  c.expect(parallel < 15, "8-worker run took " + std::to_string(parallel) + " s");
  std::ostringstream s;
  s << one.labels().size() << " types over " << one.diagrams << " diagrams, " << serial << " s serial, " << parallel
    << " s with 8 workers";
  c.note(s.str());
}

// 2. Square, granny, and two-left-one-right trefoil sums.
void composite_spherical(Check& c) {
  struct Case {
    int left, right, expect;
  };
  for (Case k : {Case{1, 1, 4}, Case{2, 0, 5}, Case{0, 2, 5}, Case{2, 1, 5}}) {
    const KnotDescriptor d = KnotDescriptor::trefoils(k.left, k.right);
    ConstructionCounts built;
    built.spherical = trefoil_composite(k.left, k.right).arc_count();
    BoundReport r = full_bounds(d, built);
    c.expect(r.spherical.exact() && r.spherical.lower == k.expect,
             d.to_string() + " sps " + interval(r.spherical) + ", want exactly " + std::to_string(k.expect));
    c.note(d.to_string() + " sps " + interval(r.spherical));
  }
}

// 3. Planar torus stars and planar exactness.
void torus_planar_check(Check& c) {
  for (auto [p, q] : {std::pair{2, 5}, {2, 7}, {3, 7}, {3, 8}}) {
    const std::string tag = "T(" + std::to_string(p) + "," + std::to_string(q) + ")";
    PlanarStickDiagram d = torus_planar(p, q);
    c.expect(d.stick_count() == q, tag + " stick count");
    c.expect(static_cast<int>(d.crossings.size()) == (p - 1) * q, tag + " crossing count");
    c.expect(is_torus(to_pd_code(d), p, q), tag + " invariant");
  }
  for (int p = 2; p <= 5; ++p)
    for (int q : {p + 1, 2 * p + 1}) {
      const KnotDescriptor d = KnotDescriptor::torus(p, q);
      ConstructionCounts built;
      if (2 * p < q) built.planar = torus_planar(p, q).stick_count();
      BoundReport r = full_bounds(d, built);
      c.expect(r.planar.exact() && r.planar.lower == 2 * p + 1, d.to_string() + " pl " + interval(r.planar));
    }
}

// 4. Spherical torus diagrams and spherical exactness.
void torus_spherical_check(Check& c) {
  for (auto [p, q] : {std::pair{2, 3}, {2, 5}, {3, 4}, {4, 5}, {6, 7}}) {
    const std::string tag = "T(" + std::to_string(p) + "," + std::to_string(q) + ")";
    SphericalStickDiagram d = torus_spherical(p, q);
    const int crossings = static_cast<int>(d.crossings.size());
    c.expect(d.arc_count() == q, tag + " arc count");
    c.expect(crossings == (p - 1) * q, tag + " crossing count");
    c.expect(closed_chain(d), tag + " not a closed chain");
    PDCode pd = to_pd_code(d);
    validate(pd);
    c.expect(static_cast<int>(pd.size()) == crossings, tag + " PD size");
    if (crossings <= 20)
      c.expect(is_torus(pd, p, q), tag + " invariant");
    else
      c.note(tag + " checked structurally (" + std::to_string(crossings) + " crossings)");
  }
  for (int q = 3; q <= 5; ++q) {
    const KnotDescriptor d = KnotDescriptor::torus(q - 1, q);
    ConstructionCounts built;
    built.spherical = torus_spherical(q - 1, q).arc_count();
    BoundReport r = full_bounds(d, built);
    c.expect(r.spherical.exact() && r.spherical.lower == q, d.to_string() + " sps " + interval(r.spherical));
  }
}

// 5. Trefoil sums on the great-circle scaffold.
void trefoil_sums(Check& c) {
  const BracketPoly left = oracle::left_trefoil(), right = oracle::right_trefoil();
  for (auto [l, r] : {std::pair{1, 0}, {1, 1}, {2, 1}, {2, 2}, {3, 1}, {0, 2}}) {
    SphericalStickDiagram d = trefoil_composite(l, r);
    const int more = std::max(l, r);
    const int want = l == r ? 2 * l + 2 : 2 * more + 1;
    const std::string tag = std::to_string(l) + "TL#" + std::to_string(r) + "TR";
    c.expect(d.arc_count() == want, tag + " has " + std::to_string(d.arc_count()) + " arcs");
    c.expect(invariant(to_pd_code(d)) == left.pow(l) * right.pow(r), tag + " invariant");
  }
}

// 6. Planar trefoil sums and consistency of every construction with every lower bound.
void bound_ledger(Check& c) {
  for (int n = 1; n <= 5; ++n) {
    BoundReport r = compute_bounds(KnotDescriptor::trefoils(n, 0));
    c.expect(r.planar.exact() && r.planar.lower == 2 * n + 3, std::to_string(n) + "T pl " + interval(r.planar));
  }
  int checked = 0;
  auto sweep = [&](const KnotDescriptor& d, std::optional<int> planar, std::optional<int> spherical) {
    ConstructionCounts built{planar, spherical};
    BoundReport r = full_bounds(d, built);
    if (planar) {
      ++checked;
      c.expect(!r.planar.lower || *planar >= *r.planar.lower, d.to_string() + " planar construction below bound");
    }
    if (spherical) {
      ++checked;
      c.expect(!r.spherical.lower || *spherical >= *r.spherical.lower,
               d.to_string() + " spherical construction below bound");
    }
  };
  for (auto [p, q] : {std::pair{2, 5}, {2, 7}, {3, 7}, {3, 8}, {2, 9}, {4, 9}, {5, 11}})
    sweep(KnotDescriptor::torus(p, q), torus_planar(p, q).stick_count(), torus_spherical(p, q).arc_count());
  for (auto [p, q] : {std::pair{2, 3}, {3, 4}, {3, 5}, {4, 5}, {5, 6}, {6, 7}})
    sweep(KnotDescriptor::torus(p, q), std::nullopt, torus_spherical(p, q).arc_count());
  for (auto [l, r] : {std::pair{1, 0}, {1, 1}, {2, 1}, {2, 2}, {3, 1}, {0, 2}, {2, 0}, {3, 3}, {4, 1}})
    sweep(KnotDescriptor::trefoils(l, r), std::nullopt, trefoil_composite(l, r, kDefaultTilt, false).arc_count());
  sweep(KnotDescriptor::trefoils(0, 2), std::nullopt, compose_spherical(torus_spherical(2, 3), torus_spherical(2, 3)).arc_count());
  c.note(std::to_string(checked) + " construction counts checked");
}

// 7. Stereographic images of great circles.
void stereographic(Check& c) {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> g;
  int ok = 0;
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    GreatCircle circle(Vec3{g(rng), g(rng), g(rng)});
    SpherePoint pole(g(rng), g(rng), g(rng));
    CirclePlanarImage img = project_great_circle(circle, pole);
    if (img.is_line) continue;
    const double err = std::abs(norm(img.p) * norm(img.q) - 1.0);
    worst = std::max(worst, err);
    ok += err <= 1e-9;
  }
  c.expect(ok == 1000, std::to_string(ok) + "/1000 within 1e-9");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", worst);
  c.note(std::string("worst ||p||q| - 1| = ") + buf);
}

/// Random knot diagram from a braid word of at most six letters whose
/// closure has one component.
PDCode random_small_knot(std::mt19937& rng) {
  for (;;) {
    const int strands = 2 + rng() % 2;
    const int length = 2 + rng() % 5;
    std::vector<int> word;
    std::vector<int> perm(strands);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<bool> used(strands - 1, false);
    for (int k = 0; k < length; ++k) {
      const int gen = 1 + rng() % (strands - 1);
      word.push_back(rng() % 2 ? gen : -gen);
      used[gen - 1] = true;
      std::swap(perm[gen - 1], perm[gen]);
    }
    if (std::count(used.begin(), used.end(), false)) continue;
    int cycle = 1;
    for (int at = perm[0]; at != 0; at = perm[at]) ++cycle;
    if (cycle != strands) continue;
    return braid_closure(strands, word);
  }
}

// 8. Invariant engine identities and the knot table audit.
void invariant_engine(Check& c) {
  std::mt19937 rng(8);
  int moves = 0, attempts = 0;
  while (moves < 200 && attempts < 2000) {
    ++attempts;
    PDCode pd = random_small_knot(rng);
    const BracketPoly want = normalized_invariant(pd);
    if (rng() % 2) {
      pd = insert_r1(pd, 1 + rng() % pd.edge_count(), rng() % 2, rng() % 2);
    } else {
      auto fs = faces(orient(pd));
      auto& f = fs[rng() % fs.size()];
      if (f.size() < 2) continue;
      const int i = rng() % f.size(), j = rng() % f.size();
      if (f[i].edge == f[j].edge) continue;
      pd = insert_r2(pd, &f - &fs[0], f[i].edge, f[j].edge);
    }
    ++moves;
    c.expect(normalized_invariant(pd) == want, "move changed the invariant: " + to_string(pd));
  }
  c.expect(moves == 200, "only " + std::to_string(moves) + " moves applied");
  for (int k = 0; k < 50; ++k) {
    PDCode a = random_small_knot(rng), b = random_small_knot(rng);
    const BracketPoly xa = normalized_invariant(a), xb = normalized_invariant(b);
    c.expect(normalized_invariant(mirror_pd(a)) == mirror(xa), "mirror identity");
    c.expect(mirror(mirror(xa)) == xa, "mirror involution");
    c.expect(normalized_invariant(connected_sum_pd(a, b)) == xa * xb, "multiplicativity");
  }
  try {
    KnotUniverse audited(KnotTable::bundled());
    c.note("audit passed over " + std::to_string(audited.size()) + " fingerprints");
  } catch (const Error& e) {
    c.expect(false, std::string("knot table audit: ") + e.what());
  }
}

// 9. Enumeration arithmetic on four circles.
void enumeration(Check& c) {
  ClassificationReport r = classify(4);
  c.expect(r.max_crossings == 8, "max crossings " + std::to_string(r.max_crossings));
  c.expect(!r.complement_histogram.count(5), "a loop has a 5-edge complement");
  c.expect(r.complement_failures == 0, std::to_string(r.complement_failures) + " complements not loops");
  c.expect(r.crossing_bound_violations == 0,
           std::to_string(r.crossing_bound_violations) + " loops exceed 10 - ceil(n/2) crossings");
  c.note(std::to_string(r.loops) + " loops");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"four-circle classification", classification},
      {"square, granny, and 2TL#1TR spherical index", composite_spherical},
      {"planar torus diagrams", torus_planar_check},
      {"spherical torus diagrams", torus_spherical_check},
      {"trefoil sums on the scaffold", trefoil_sums},
      {"bound ledger", bound_ledger},
      {"stereographic circle images", stereographic},
      {"invariant engine", invariant_engine},
      {"enumeration arithmetic", enumeration},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    failed += !ok;
    std::string detail;
    for (const auto& f : c.failures) detail += (detail.empty() ? "" : "; ") + f;
    if (ok)
      for (const auto& n : c.notes) detail += (detail.empty() ? "" : "; ") + n;
    std::printf("[%s] %zu. %s%s%s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
