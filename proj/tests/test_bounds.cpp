#include <gtest/gtest.h>

#include <cmath>

#include "stickknot/bounds.hpp"
#include "stickknot/classifier.hpp"

using namespace stickknot;

namespace {

/// Classification facts for three and four circles, computed once.
const std::vector<ClassificationFacts>& facts() {
  static const std::vector<ClassificationFacts> f{classify(3).facts(), classify(4).facts()};
  return f;
}

}  // namespace

TEST(Bounds, CrossingFormulasMatchClosedForms) {
  for (int c = 0; c <= 200; ++c) {
    const double planar = (3 + std::sqrt(9.0 + 8 * c)) / 2;
    const double spherical = 1 + std::sqrt(1.0 + c);
    EXPECT_EQ(planar_crossing_lower(c), std::max(3, static_cast<int>(std::ceil(planar - 1e-12)))) << c;
    EXPECT_EQ(spherical_crossing_lower(c), std::max(2, static_cast<int>(std::ceil(spherical - 1e-12)))) << c;
  }
}

TEST(Bounds, TrefoilPlanarIsFive) {
  auto r = compute_bounds(KnotDescriptor::trefoils(1, 0));
  EXPECT_EQ(r.planar.lower, 5);
  EXPECT_EQ(r.planar.upper, 5);
  EXPECT_TRUE(r.planar.exact());
}

TEST(Bounds, TrefoilSumsPlanarExact) {
  for (int n = 1; n <= 5; ++n) {
    auto r = compute_bounds(KnotDescriptor::trefoils(n, 0));
    EXPECT_TRUE(r.planar.exact()) << n;
    EXPECT_EQ(r.planar.lower, 2 * n + 3);
  }
}

TEST(Bounds, TorusPlanarExactCases) {
  for (int p = 2; p <= 5; ++p)
    for (int q : {p + 1, 2 * p + 1}) {
      auto d = KnotDescriptor::torus(p, q);
      auto r = compute_bounds(d, construction_formula_counts(d));
      EXPECT_TRUE(r.planar.exact()) << p << "," << q;
      EXPECT_EQ(r.planar.lower, 2 * p + 1);
    }
  auto open = compute_bounds(KnotDescriptor::torus(3, 7));
  EXPECT_FALSE(open.planar.upper);
  EXPECT_THROW(require_complete(open), Error);
}

TEST(Bounds, TorusSphericalExact) {
  for (int q = 3; q <= 5; ++q) {
    auto d = KnotDescriptor::torus(q - 1, q);
    auto r = compute_bounds(d, construction_formula_counts(d));
    EXPECT_TRUE(r.spherical.exact()) << q;
    EXPECT_EQ(r.spherical.lower, q);
  }
}

TEST(Bounds, SquareGrannyAndThreeTrefoils) {
  auto square = compute_bounds(KnotDescriptor::trefoils(1, 1), construction_formula_counts(KnotDescriptor::trefoils(1, 1)), facts());
  EXPECT_TRUE(square.spherical.exact());
  EXPECT_EQ(square.spherical.lower, 4);
  for (auto d : {KnotDescriptor::trefoils(2, 0), KnotDescriptor::trefoils(0, 2), KnotDescriptor::trefoils(2, 1)}) {
    auto r = compute_bounds(d, construction_formula_counts(d), facts());
    EXPECT_TRUE(r.spherical.exact()) << d.to_string();
    EXPECT_EQ(r.spherical.lower, 5) << d.to_string();
  }
}

TEST(Bounds, MoreInformationNeverWidens) {
  std::vector<KnotDescriptor> knots{KnotDescriptor::torus(2, 3), KnotDescriptor::torus(3, 4),
                                    KnotDescriptor::torus(2, 7), KnotDescriptor::torus(4, 5),
                                    KnotDescriptor::trefoils(1, 1), KnotDescriptor::trefoils(3, 1)};
  for (const auto& d : knots) {
    auto bare = compute_bounds(d);
    auto built = compute_bounds(d, construction_formula_counts(d));
    auto all = compute_bounds(d, construction_formula_counts(d), facts(), d.kind == KnotDescriptor::Kind::Torus ? KnotUniverse::standard().torus_name(d.p, d.q) : "");
    for (auto [narrow, wide] : {std::pair{&built, &bare}, {&all, &built}}) {
      for (auto [n, w] : {std::pair{&narrow->planar, &wide->planar}, {&narrow->spherical, &wide->spherical}}) {
        if (w->lower) EXPECT_GE(n->lower.value(), *w->lower);
        if (w->upper) EXPECT_LE(n->upper.value(), *w->upper);
      }
    }
  }
}

TEST(Bounds, EveryEntryHasProvenance) {
  auto r = compute_bounds(KnotDescriptor::torus(3, 4), construction_formula_counts(KnotDescriptor::torus(3, 4)));
  for (const auto* iv : {&r.planar, &r.spherical}) {
    ASSERT_FALSE(iv->provenance.empty());
    int best_lower = 0;
    for (const auto& e : iv->provenance) {
      EXPECT_FALSE(e.source.empty());
      if (e.side == BoundEntry::Side::Lower) best_lower = std::max(best_lower, e.value);
    }
    EXPECT_EQ(iv->lower, best_lower);
  }
}

TEST(Bounds, UnknownDescriptorsAreRejected) {
  EXPECT_THROW(compute_bounds(KnotDescriptor::torus(2, 4)), Error);
  EXPECT_THROW(compute_bounds(KnotDescriptor::trefoils(0, 0)), Error);
}
