#include <gtest/gtest.h>

#include <random>

#include "stickknot/geom.hpp"

using namespace stickknot;

namespace {

SpherePoint random_point(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return SpherePoint(g(rng), g(rng), g(rng));
}

}  // namespace

TEST(Geom, SpherePointIsRenormalized) {
  SpherePoint p(3, 4, 12);
  EXPECT_NEAR(norm(p.vec()), 1.0, 1e-12);
  EXPECT_EQ(p.antipode().vec(), -p.vec());
}

TEST(Geom, FrameIsOrthonormal) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    GreatCircle c(random_point(rng));
    const Vec3 n = c.normal().vec();
    EXPECT_NEAR(dot(c.u(), c.v()), 0, kOrthoTol);
    EXPECT_NEAR(dot(c.u(), n), 0, kOrthoTol);
    EXPECT_NEAR(dot(c.v(), n), 0, kOrthoTol);
    EXPECT_NEAR(norm(c.u()), 1, kOrthoTol);
    EXPECT_NEAR(dot(cross(c.u(), c.v()), n), 1, kOrthoTol);
  }
}

TEST(Geom, IntersectCoordinateCircles) {
  auto [p, q] = intersect_great_circles(GreatCircle(Vec3{0, 0, 1}), GreatCircle(Vec3{1, 0, 0}));
  EXPECT_NEAR(std::abs(p.y()), 1.0, 1e-15);
  EXPECT_EQ(q.vec(), -p.vec());
  EXPECT_THROW(intersect_great_circles(GreatCircle(Vec3{0, 0, 1}), GreatCircle(Vec3{0, 0, 2})), Error);
  try {
    intersect_great_circles(GreatCircle(Vec3{1, 1, 0}), GreatCircle(Vec3{-1, -1, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParallelCircles);
  }
}

TEST(Geom, IntersectionsLieOnBothCirclesAndAreAntipodal) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    GreatCircle a(random_point(rng)), b(random_point(rng));
    auto [p, q] = intersect_great_circles(a, b);
    EXPECT_LE(std::abs(a.offset(p)), 1e-12);
    EXPECT_LE(std::abs(b.offset(p)), 1e-12);
    EXPECT_LE(std::abs(a.offset(q)), 1e-12);
    EXPECT_EQ(q.vec(), -p.vec());
  }
}

TEST(Geom, StereographicFixedPoints) {
  SpherePoint north(0, 0, 1);
  PlanarPoint e = stereographic_project(SpherePoint(1, 0, 0), north);
  EXPECT_NEAR(e.x, 1, 1e-15);
  EXPECT_NEAR(e.y, 0, 1e-15);
  PlanarPoint s = stereographic_project(SpherePoint(0, 0, -1), north);
  EXPECT_NEAR(norm(s), 0, 1e-15);
  try {
    stereographic_project(north, north);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::AtPole);
  }
}

TEST(Geom, StereographicRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    SpherePoint pole = random_point(rng);
    SpherePoint p = random_point(rng);
    if (angular_distance(p, pole) < 1e-3) continue;
    SpherePoint back = stereographic_unproject(stereographic_project(p, pole), pole);
    EXPECT_LE(angular_distance(p, back), 1e-9);
  }
}

TEST(Geom, EquatorProjectsToUnitCircle) {
  auto img = project_great_circle(GreatCircle(Vec3{0, 0, 1}), SpherePoint(0, 0, 1));
  ASSERT_FALSE(img.is_line);
  EXPECT_NEAR(norm(img.center), 0, 1e-12);
  EXPECT_NEAR(img.radius, 1, 1e-12);
  auto line = project_great_circle(GreatCircle(Vec3{1, 0, 0}), SpherePoint(0, 0, 1));
  EXPECT_TRUE(line.is_line);
  EXPECT_NEAR(std::abs(line.direction.y), 1, 1e-12);
}

// Diameter endpoints through the origin of any projected great circle have
// reciprocal lengths; the circle image really is a circle through them.
TEST(Geom, ProjectedCircleDiameterProductIsOne) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    GreatCircle c(random_point(rng));
    SpherePoint pole = random_point(rng);
    auto img = project_great_circle(c, pole);
    if (img.is_line) continue;
    ++checked;
    EXPECT_NEAR(norm(img.p) * norm(img.q), 1.0, 1e-9);
    EXPECT_LE(cross(img.p, img.q), 1e-9 * std::max(1.0, norm(img.p) * norm(img.q)));
    Stereographic proj(pole);
    for (double phi : {0.3, 1.7, 4.0}) {
      SpherePoint x = c.point_at(phi);
      if (angular_distance(x, pole) < 1e-6) continue;
      EXPECT_NEAR(norm(proj.project(x) - img.center), img.radius, 1e-9 * std::max(1.0, img.radius));
    }
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Geom, OrientationMatchesStereographicImage) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    GreatCircle c(random_point(rng));
    SpherePoint pole = random_point(rng);
    Stereographic proj(pole);
    auto img = project_great_circle(c, pole);
    if (img.is_line || img.radius > 1e3) continue;
    // Signed area swept around the image center as phi increases.
    PlanarPoint a = proj.project(c.point_at(0.0)) - img.center;
    PlanarPoint b = proj.project(c.point_at(0.01)) - img.center;
    EXPECT_EQ(cross(a, b) > 0, c.is_counterclockwise_from(pole));
  }
}

TEST(Geom, ArcContainment) {
  GreatCircle eq(Vec3{0, 0, 1});
  GreatArc half(eq, 0, kPi);
  EXPECT_EQ(half.locate_angle(kPi / 2).where, ArcLocation::Interior);
  EXPECT_EQ(half.locate_angle(0).where, ArcLocation::Start);
  EXPECT_TRUE(half.locate_angle(0).at_endpoint());
  EXPECT_EQ(half.locate_angle(kPi).where, ArcLocation::End);
  EXPECT_EQ(half.locate_angle(3 * kPi / 2).where, ArcLocation::Outside);
  GreatArc wrap(eq, 3 * kPi / 2, kPi / 2);
  EXPECT_EQ(wrap.locate_angle(0).where, ArcLocation::Interior);
  EXPECT_EQ(wrap.contains(eq.point_at(0)).where, ArcLocation::Interior);
  EXPECT_NEAR(wrap.length(), kPi, 1e-15);
  try {
    half.contains(SpherePoint(0, 0, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotOnCircle);
  }
  EXPECT_THROW(GreatArc(eq, 1.0, 1.0), Error);
}

TEST(Geom, ArcContainmentIgnoresFullTurns) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0, kTwoPi);
  GreatCircle c(Vec3{0.3, -0.2, 0.9});
  for (int i = 0; i < 1000; ++i) {
    double s = ang(rng), e = ang(rng), x = ang(rng);
    if (std::abs(s - e) < 1e-6) continue;
    GreatArc a(c, s, e), b(c, s + kTwoPi, e + kTwoPi);
    EXPECT_EQ(a.locate_angle(x).where, b.locate_angle(x).where);
  }
}

TEST(Geom, ArcReversalKeepsPointSet) {
  GreatArc a(GreatCircle(Vec3{1, 2, 3}), 0.4, 2.0);
  GreatArc r = a.reversed();
  EXPECT_NEAR(r.length(), a.length(), 1e-12);
  EXPECT_LE(angular_distance(r.start_point(), a.end_point()), 1e-12);
  EXPECT_LE(angular_distance(r.end_point(), a.start_point()), 1e-12);
  EXPECT_LE(angular_distance(r.point_at_offset(0.5), a.point_at_offset(a.length() - 0.5)), 1e-12);
}
