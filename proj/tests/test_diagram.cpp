#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stickknot/diagram.hpp"
#include "stickknot/diagram_json.hpp"
#include "stickknot/identify.hpp"

using namespace stickknot;

namespace {

// Right-handed trefoil with six sticks, found by a seeded integer search.
const PolygonalKnot3D kSixStickTrefoil{{{-1, 0, 2}, {-3, -4, -3}, {0, 1, 4}, {-2, 3, -3}, {-1, -1, 2}, {2, 0, -1}}};

std::vector<PlanarPoint> pentagram() {
  std::vector<PlanarPoint> v;
  for (int k : {0, 2, 4, 1, 3}) v.push_back({std::cos(2 * kPi * k / 5), std::sin(2 * kPi * k / 5)});
  return v;
}

/// Brute-force count of properly crossing stick pairs.
int count_crossings(const std::vector<PlanarPoint>& v) {
  const int n = static_cast<int>(v.size());
  int c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      PlanarPoint a = v[i], b = v[(i + 1) % n], p = v[j], q = v[(j + 1) % n];
      const bool split1 = (cross(b - a, p - a) > 0) != (cross(b - a, q - a) > 0);
      const bool split2 = (cross(q - p, a - p) > 0) != (cross(q - p, b - p) > 0);
      c += split1 && split2;
    }
  return c;
}

/// Alternates over/under along the traversal.
template <class Diagram>
void make_alternating(Diagram& d, int strands) {
  bool over = true;
  for (int s = 0; s < strands; ++s) {
    std::vector<std::pair<double, int>> on;
    for (int c = 0; c < static_cast<int>(d.crossings.size()); ++c)
      if (d.crossings[c].involves(s)) on.push_back({d.crossings[c].offset_on(s), c});
    std::sort(on.begin(), on.end());
    for (auto [t, c] : on) {
      if (over) d.crossings[c].over = s;
      over = !over;
    }
  }
}

}  // namespace

TEST(PlanarCrossings, PentagramHasFive) {
  auto d = extract_crossings_planar(pentagram());
  EXPECT_EQ(d.crossings.size(), 5u);
  EXPECT_EQ(count_crossings(pentagram()), 5);
}

TEST(PlanarCrossings, TriangleHasNone) {
  auto d = extract_crossings_planar({{0, 0}, {1, 0}, {0, 1}});
  EXPECT_TRUE(d.crossings.empty());
  EXPECT_TRUE(to_pd_code(d).crossings.empty());
}

TEST(PlanarCrossings, DegenerateInputsAreRejected) {
  auto code = [](std::vector<PlanarPoint> v) {
    try {
      extract_crossings_planar(v);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Unidentified;
  };
  EXPECT_EQ(code({{0, 0}, {0, 0}, {1, 1}}), ErrorCode::DegenerateDiagram);
  EXPECT_EQ(code({{0, 0}, {2, 0}, {1, 0}, {1, 1}}), ErrorCode::DegenerateDiagram);  // folds back
  EXPECT_EQ(code({{0, 0}, {2, 0}, {2, 2}, {1, 0}, {0, 2}}), ErrorCode::DegenerateDiagram);  // vertex on stick
  // Three sticks through the origin.
  std::vector<PlanarPoint> hexagram;
  for (int k : {0, 3, 1, 4, 2, 5}) hexagram.push_back({std::cos(kPi * k / 3), std::sin(kPi * k / 3)});
  EXPECT_EQ(code(hexagram), ErrorCode::DegenerateDiagram);
}

TEST(PlanarCrossings, RandomPolygonsMatchBruteForceAndBound) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  int done = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = 3 + t % 8;
    std::vector<PlanarPoint> v;
    for (int i = 0; i < n; ++i) v.push_back({u(rng), u(rng)});
    try {
      auto d = extract_crossings_planar(v);
      EXPECT_EQ(static_cast<int>(d.crossings.size()), count_crossings(v));
      EXPECT_LE(static_cast<int>(d.crossings.size()), n * (n - 3) / 2);
      ++done;
    } catch (const Error&) {
    }
  }
  EXPECT_GT(done, 290);
}

TEST(PlanarPD, AlternatingPentagramIsCinquefoil) {
  auto d = extract_crossings_planar(pentagram());
  EXPECT_THROW(to_pd_code(d), Error);
  make_alternating(d, d.stick_count());
  PDCode pd = to_pd_code(d);
  EXPECT_EQ(pd.size(), 5u);
  validate(pd);
  const auto& ref = KnotTable::bundled().at("5_1").fingerprint;
  BracketPoly x = normalized_invariant(pd);
  EXPECT_TRUE(x == ref || x == mirror(ref));
  EXPECT_EQ(identify(pd).name, "5_1");
}

TEST(PlanarPD, MissingCrossingInfo) {
  auto d = extract_crossings_planar(pentagram());
  try {
    to_pd_code(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingCrossingInfo);
  }
}

TEST(PlanarPD, GaussRoundTrip) {
  auto d = extract_crossings_planar(pentagram());
  make_alternating(d, 5);
  GaussCode g = to_gauss_code(d);
  EXPECT_EQ(g.entries.size(), 10u);
  EXPECT_EQ(normalized_invariant(from_gauss(parse_gauss(to_string(g)))), normalized_invariant(to_pd_code(d)));
}

TEST(Projection, SixStickTrefoilAlongAnyGenericDirection) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    SpherePoint dir = search_generic_direction(kSixStickTrefoil, seed);
    auto d = project_orthogonal(kSixStickTrefoil, dir);
    EXPECT_EQ(d.stick_count(), 6);
    KnotId id = identify(to_pd_code(d));
    EXPECT_EQ(id.name, "3_1");
    EXPECT_EQ(id.chirality, Chirality::AsTabled);
  }
}

TEST(Projection, AlongAStickGivesFivePlanarSticks) {
  const auto& v = kSixStickTrefoil.vertices;
  for (int i = 0; i < 6; ++i) {
    SpherePoint along(v[(i + 1) % 6] - v[i]);
    try {
      auto d = project_orthogonal(kSixStickTrefoil, along);
      EXPECT_EQ(d.stick_count(), 5);
      EXPECT_EQ(identify(to_pd_code(d)).name, "3_1");
    } catch (const Error& e) {
      // A non-generic shadow; a nearby direction must still collapse nothing
      // but project to the trefoil.
      EXPECT_EQ(e.code(), ErrorCode::DegenerateProjection);
      auto d = project_orthogonal(kSixStickTrefoil, perturb_direction(kSixStickTrefoil, along, i));
      EXPECT_EQ(identify(to_pd_code(d)).name, "3_1");
    }
  }
}

TEST(Projection, PlanarPolygonAlongItsNormal) {
  PolygonalKnot3D flat;
  for (auto p : pentagram()) flat.vertices.push_back({p.x, p.y, 0});
  try {
    project_orthogonal(flat, SpherePoint(0, 0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateProjection);  // strands meet in space
  }
  PolygonalKnot3D tri{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}};
  auto d = project_orthogonal(tri, SpherePoint(0, 0, 1));
  EXPECT_EQ(d.stick_count(), 3);
  EXPECT_TRUE(d.crossings.empty());
}

TEST(Projection, RadialFromVertexGivesFourArcs) {
  for (int v = 0; v < 6; ++v) {
    try {
      auto d = project_radial(kSixStickTrefoil, kSixStickTrefoil.vertices[v]);
      EXPECT_EQ(d.arc_count(), 4);
      EXPECT_LE(static_cast<int>(d.crossings.size()), 4 * 2);
      EXPECT_EQ(identify(to_pd_code(d)).name, "3_1") << "vertex " << v;
    } catch (const Error& e) {
      ADD_FAILURE() << "vertex " << v << ": " << e.what();
    }
  }
}

TEST(Projection, RadialArcsAreShorterThanHalfTurn) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int t = 0; t < 50; ++t) {
    Vec3 c{0.1 * g(rng), 0.1 * g(rng), 0.1 * g(rng)};
    auto d = project_radial(kSixStickTrefoil, c);
    EXPECT_EQ(d.arc_count(), 6);
    for (const auto& a : d.arcs) EXPECT_LT(a.length(), kPi);
    EXPECT_LE(static_cast<int>(d.crossings.size()), 6 * 4);
    EXPECT_EQ(identify(to_pd_code(d)).name, "3_1");
  }
}

TEST(Projection, FarRadialCenterMatchesOrthogonal) {
  SpherePoint dir = search_generic_direction(kSixStickTrefoil, 4);
  auto flat = project_orthogonal(kSixStickTrefoil, dir);
  auto sph = project_radial(kSixStickTrefoil, -1e4 * dir.vec());
  EXPECT_EQ(flat.crossings.size(), sph.crossings.size());
  EXPECT_EQ(normalized_invariant(to_pd_code(flat)), normalized_invariant(to_pd_code(sph)));
}

TEST(SphericalCrossings, TwoHalfCirclesAreUnknot) {
  GreatCircle a(Vec3{0, 0, 1}), b(Vec3{0, 1, 1});
  auto [p, q] = intersect_great_circles(a, b);
  auto d = extract_crossings_spherical({GreatArc::between(a, p, q), GreatArc::between(b, q, p)});
  EXPECT_LE(d.crossings.size(), 1u);
  EXPECT_TRUE(normalized_invariant(to_pd_code(d)).is_one());
}

TEST(SphericalCrossings, DisconnectedChainIsRejected) {
  GreatCircle a(Vec3{0, 0, 1});
  try {
    extract_crossings_spherical({GreatArc(a, 0, 1), GreatArc(a, 2, 3)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DisconnectedChain);
  }
}

TEST(DiagramJson, PlanarRoundTrip) {
  auto d = extract_crossings_planar(pentagram());
  make_alternating(d, 5);
  json j = to_json(d);
  auto back = std::get<PlanarStickDiagram>(diagram_from_json(json::parse(j.dump())));
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(to_pd_code(back), to_pd_code(d));
}

TEST(DiagramJson, SphericalRoundTrip) {
  auto d = project_radial(kSixStickTrefoil, kSixStickTrefoil.vertices[0]);
  json j = to_json(d);
  auto back = std::get<SphericalStickDiagram>(parse_diagram_text(j.dump()));
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(to_pd_code(back), to_pd_code(d));
}

TEST(DiagramJson, OtherFormats) {
  auto k = std::get<PolygonalKnot3D>(parse_diagram_text(to_json(kSixStickTrefoil).dump()));
  EXPECT_EQ(k.vertices, kSixStickTrefoil.vertices);
  EXPECT_EQ(identify(pd_of(k)).name, "3_1");
  auto pd = std::get<PDCode>(parse_diagram_text("X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]\n"));
  EXPECT_EQ(pd.size(), 3u);
  auto g = std::get<PDCode>(parse_diagram_text(to_string(to_gauss(pd))));
  EXPECT_EQ(normalized_invariant(g), normalized_invariant(pd));
  EXPECT_THROW(parse_diagram_text("{\"kind\":\"hexagon\"}"), Error);
  EXPECT_THROW(parse_diagram_text("{broken"), Error);
}

TEST(DiagramJson, CrossingMismatchIsAParseError) {
  json j = to_json(extract_crossings_planar(pentagram()));
  j["crossings"].erase(0);
  try {
    diagram_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}
