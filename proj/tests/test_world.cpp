#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "isa/world/lanes.hpp"
#include "isa/world/scenario.hpp"

using namespace isa;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kCase1 = std::string(ISA_SOURCE_DIR) + "/configs/case1.json";

}  // namespace

TEST(LaneOf, LaneCenters) {
  const LaneGeometry g;
  EXPECT_EQ(lane_of(1.875, g), 1);
  EXPECT_EQ(lane_of(9.375, g), 3);
  // ceil((5.625 - 0.5) / 3.75) = ceil(1.3667) = 2
  EXPECT_EQ(lane_of(5.625, g, 0.5), 2);
}

TEST(LaneOf, OffRoadThrows) {
  const LaneGeometry g;
  EXPECT_THROW(lane_of(-0.1, g), std::out_of_range);
  EXPECT_THROW(lane_of(11.3, g), std::out_of_range);
}

TEST(LaneOf, MonotoneInY) {
  const LaneGeometry g;
  int prev = lane_of(0.0, g);
  for (double y = 0.0; y <= g.road_width(); y += 0.01) {
    const int lane = lane_of(y, g);
    EXPECT_GE(lane, prev) << "y = " << y;
    prev = lane;
  }
}

TEST(LaneOf, BoundaryBelongsToLowerLane) {
  const LaneGeometry g;
  EXPECT_EQ(lane_of(3.75, g), 1);
  EXPECT_EQ(lane_of(3.7500001, g), 2);
  EXPECT_EQ(lane_index_clamped(-2.0, 3.75), 1);
  EXPECT_EQ(lane_index_clamped(14.0, 3.75), 3);
}

TEST(Maneuvers, LaneTable) {
  EXPECT_EQ(admissible_maneuvers(1).size(), 2u);
  EXPECT_EQ(admissible_maneuvers(2).size(), 3u);
  EXPECT_EQ(admissible_maneuvers(3).size(), 2u);
  EXPECT_EQ(sv_maneuver_between(3, 2), Maneuver::M5);
  EXPECT_EQ(sv_maneuver_between(1, 2), Maneuver::M1);
  EXPECT_EQ(target_lane(Maneuver::M4), 3);
  EXPECT_EQ(origin_lane(Maneuver::M2), 2);
  EXPECT_TRUE(is_lane_keep(Maneuver::M6));
  EXPECT_FALSE(is_lane_keep(Maneuver::M5));
  EXPECT_EQ(target_lane(Maneuver::VT3), 3);
  EXPECT_THROW(sv_maneuver_between(1, 3), std::invalid_argument);
  for (Maneuver m : kSvManeuvers) EXPECT_EQ(maneuver_from_string(to_string(m)), m);
}

TEST(Scenario, CaseOneLoads) {
  const ScenarioConfig c = load_scenario(kCase1);
  EXPECT_EQ(c.surrounding().size(), 5u);
  EXPECT_DOUBLE_EQ(c.ego().x, 0.0);
  EXPECT_NEAR(c.ego().vx, 105.0 / 3.6, 1e-12);
  EXPECT_DOUBLE_EQ(c.ego().y, 1.875);
  EXPECT_EQ(c.planner.kind, PlannerKind::Isa);
}

TEST(Scenario, EpsilonZeroRejected) {
  std::string text = read_file(kCase1);
  const auto pos = text.find("\"epsilon\": 0.2");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 14, "\"epsilon\": 0.0");
  EXPECT_THROW(parse_scenario(text), ValidationError);
}

TEST(Scenario, TwoEgosRejected) {
  std::string text = read_file(kCase1);
  const auto pos = text.find("\"role\": \"scripted\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 18, "\"role\": \"ego\"");
  EXPECT_THROW(parse_scenario(text), ValidationError);
}

TEST(Scenario, ParseErrorCarriesLocation) {
  std::string text = read_file(kCase1);
  const auto pos = text.find("\"steps\": 40");
  text.replace(pos, 11, "\"steps\": \"forty\"");
  try {
    parse_scenario(text, "case1");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(e.where().find("/steps"), std::string::npos) << e.where();
  }
}

TEST(Scenario, UnknownKeyRejected) {
  std::string text = read_file(kCase1);
  text.replace(text.find("\"horizon\""), 9, "\"horizn\"");
  EXPECT_THROW(parse_scenario(text), ParseError);
}

TEST(Scenario, SerializeRoundTrip) {
  for (const char* name : {"case1", "case2", "case3"}) {
    const ScenarioConfig c = load_scenario(std::string(ISA_SOURCE_DIR) + "/configs/" + name + ".json");
    const ScenarioConfig back = parse_scenario(serialize_scenario(c));
    EXPECT_EQ(back, c) << name;
  }
}

TEST(Scenario, ValidationNamesInvariant) {
  ScenarioConfig c = load_scenario(kCase1);
  c.planner.k_sam = 1;
  try {
    c.validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("k_sam"), std::string::npos) << e.what();
  }
  c = load_scenario(kCase1);
  c.horizon = 0;
  EXPECT_THROW(c.validate(), ValidationError);
  c = load_scenario(kCase1);
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
}
