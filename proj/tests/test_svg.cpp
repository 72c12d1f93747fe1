#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "stickknot/constructions.hpp"
#include "stickknot/diagram_json.hpp"
#include "stickknot/svg.hpp"

using namespace stickknot;

namespace {

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Svg, SphericalTrefoilHasThreeGappedArcs) {
  RenderResult r = render_svg(torus_spherical(2, 3));
  // Each arc is broken once where it passes under.
  EXPECT_EQ(count(r.svg, "<path"), 6);
  EXPECT_EQ(count(r.svg, " A "), 6);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Svg, PentagramHasFiveGappedSegments) {
  RenderResult r = render_svg(torus_planar(2, 5));
  EXPECT_EQ(count(r.svg, "<line"), 10);
}

TEST(Svg, TriangleHasNoGaps) {
  RenderResult r = render_svg(extract_crossings_planar({{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(count(r.svg, "<line"), 3);
}

TEST(Svg, OutputIsDeterministicAndMatchesGolden) {
  const std::string a = render_svg(torus_spherical(2, 3)).svg;
  EXPECT_EQ(a, render_svg(torus_spherical(2, 3)).svg);
  EXPECT_EQ(a, slurp(std::string(TEST_DATA_DIR) + "/trefoil_spherical.svg"));
}

TEST(Svg, PoleOnTheDiagramIsNudged) {
  SphericalStickDiagram d = torus_spherical(2, 3);
  RenderSpec spec;
  spec.pole = d.arcs[0].point_at_offset(0.5 * d.arcs[0].length());
  RenderResult r = render_svg(d, spec);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_GT(angular_distance(*r.pole, *spec.pole), 0.0);
  EXPECT_LE(angular_distance(*r.pole, *spec.pole), 5e-3);
}

TEST(Svg, RenderingLeavesJsonRoundTripIntact) {
  SphericalStickDiagram d = trefoil_composite(1, 1);
  const json j = to_json(d);
  render_svg(d);
  SphericalStickDiagram back = spherical_from_json(json::parse(j.dump()));
  ASSERT_EQ(back.arcs.size(), d.arcs.size());
  for (std::size_t i = 0; i < d.arcs.size(); ++i) {
    EXPECT_EQ(back.arcs[i].circle().normal().vec(), d.arcs[i].circle().normal().vec());
    EXPECT_EQ(back.arcs[i].start_angle(), d.arcs[i].start_angle());
    EXPECT_EQ(back.arcs[i].end_angle(), d.arcs[i].end_angle());
  }
  ASSERT_EQ(back.crossings.size(), d.crossings.size());
  for (std::size_t c = 0; c < d.crossings.size(); ++c) {
    EXPECT_EQ(back.crossings[c].strands, d.crossings[c].strands);
    EXPECT_EQ(back.crossings[c].over, d.crossings[c].over);
  }
}
