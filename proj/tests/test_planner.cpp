#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "isa/planner/direct_vehicle.hpp"
#include "isa/planner/ego_model.hpp"
#include "isa/planner/moving_target.hpp"
#include "isa/planner/planner.hpp"
#include "isa/predictor/predictor.hpp"
#include "isa/primitives/gain_set.hpp"

using namespace isa;

namespace {

constexpr double kT = 0.32;
constexpr int kN = 25;

const GainLibrary& library() {
  static const GainLibrary lib = identify_synthetic(2023, LaneGeometry{}, kT, 40);
  return lib;
}

Vec8 ego_state(double x, double v, double y) {
  Vec8 xi = Vec8::Zero();
  xi(ego::X) = x;
  xi(ego::V) = v;
  xi(ego::Y) = y;
  return xi;
}

SvOccupancy constant_rects(const std::string& id, double ox, double oy, double length, double width) {
  SvOccupancy o{id, {}};
  for (int t = 0; t < kN; ++t) o.rects.push_back({ox, oy, length, width});
  return o;
}

}  // namespace

TEST(EgoModel, RestStateIsUnchanged) {
  const Vec8 xi = Vec8::Zero();
  EXPECT_TRUE(step_ego(xi, Input::Zero(), kT, EgoParams{}).isApprox(xi));
  EXPECT_EQ(step_ego(xi, Input::Zero(), kT, EgoParams{}).norm(), 0.0);
}

TEST(EgoModel, ConstantSpeedAdvances) {
  const Vec8 next = step_ego(ego_state(0, 20, 1.875), Input::Zero(), kT, EgoParams{});
  EXPECT_NEAR(next(ego::X), 6.4, 1e-12);
  EXPECT_NEAR(next(ego::Y), 1.875, 1e-12);
  EXPECT_NEAR(next(ego::V), 20.0, 1e-12);
}

TEST(EgoModel, YawRateFromSteering) {
  Vec8 xi = ego_state(0, 20, 0);
  xi(ego::DELTA) = 0.01;
  const EgoParams p;
  const Vec8 f = ego_dynamics(xi, Input::Zero(), p);
  EXPECT_NEAR(f(ego::PHI), 20 * 0.01 / (1.477 + 1.446), 1e-12);
  EXPECT_NEAR(f(ego::PHI), 0.06842, 1e-5);
  EXPECT_NEAR(f(ego::Y), 20 * 1.446 / 2.923 * 0.01, 1e-12);
}

TEST(EgoModel, JacobianMatchesFiniteDifferences) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const EgoParams p;
  for (int trial = 0; trial < 20; ++trial) {
    Vec8 xi;
    for (int i = 0; i < 8; ++i) xi(i) = u(rng);
    xi(ego::V) = 20 + 5 * u(rng);
    xi(ego::PHI) = 0.1 * u(rng);
    xi(ego::DELTA) = 0.05 * u(rng);
    const Input in(u(rng), u(rng));
    Mat8 jx;
    Mat82 ju;
    step_ego(xi, in, kT, p, jx, ju);
    const double h = 1e-6;
    for (int j = 0; j < 8; ++j) {
      Vec8 a = xi, b = xi;
      a(j) += h;
      b(j) -= h;
      const Vec8 col = (step_ego(a, in, kT, p) - step_ego(b, in, kT, p)) / (2 * h);
      EXPECT_LT((col - jx.col(j)).cwiseAbs().maxCoeff(), 1e-6) << "state " << j;
    }
    for (int j = 0; j < 2; ++j) {
      Input a = in, b = in;
      a(j) += h;
      b(j) -= h;
      const Vec8 col = (step_ego(xi, a, kT, p) - step_ego(xi, b, kT, p)) / (2 * h);
      EXPECT_LT((col - ju.col(j)).cwiseAbs().maxCoeff(), 1e-6) << "input " << j;
    }
  }
}

TEST(MovingTarget, EmptyRoadGivesNominalSpeeds) {
  const LaneGeometry g;
  const auto mt = ego_maneuver_targets(ego_state(0, 25, 1.875), EgoParams{}, {}, g, MovingTargetSettings{});
  for (int i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(mt.options[i].v_ref, g.nominal(i + 1));
    EXPECT_DOUBLE_EQ(mt.options[i].y_ref, g.center(i + 1));
    EXPECT_FALSE(mt.options[i].constrained);
  }
  EXPECT_EQ(mt.maneuver, Maneuver::VT1);
  EXPECT_FALSE(mt.all_infeasible);
}

TEST(MovingTarget, BlockingVehicleConstrainsAllLanes) {
  const LaneGeometry g;
  const auto wall = constant_rects("wall", 30.0, 0.5 * g.road_width(), 4.3, g.road_width());
  const auto mt = ego_maneuver_targets(ego_state(0, 25, 5.625), EgoParams{}, {{30.0, &wall}}, g,
                                       MovingTargetSettings{});
  double sum = 0.0;
  for (const auto& o : mt.options) {
    EXPECT_TRUE(o.constrained);
    EXPECT_LT(o.v_ref, 25.0);
    if (!o.infeasible) {
      EXPECT_EQ(o.binding_sv, "wall");
    }
    sum += o.probability;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(MovingTarget, VehicleBehindIsIgnored) {
  const LaneGeometry g;
  const auto rects = constant_rects("behind", -20.0, 1.875, 4.3, 1.8);
  const auto mt = ego_maneuver_targets(ego_state(0, 25, 1.875), EgoParams{}, {{-20.0, &rects}}, g,
                                       MovingTargetSettings{});
  EXPECT_DOUBLE_EQ(mt.options[0].v_ref, g.nominal(1));
}

TEST(MovingTarget, ProbabilitiesFromCosts) {
  const auto p = ego_maneuver_probabilities({1.0, 4.0, 9.0}, 0.0);
  const double z = 1.0 + 0.5 + 1.0 / 3.0;
  EXPECT_NEAR(p[0], 1.0 / z, 1e-12);
  EXPECT_NEAR(p[1], 0.5 / z, 1e-12);
  EXPECT_NEAR(p[2], 1.0 / 3.0 / z, 1e-12);
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::array<double, 3> c{u(rng), u(rng), u(rng)};
    const std::array<double, 3> scaled{7 * c[0], 7 * c[1], 7 * c[2]};
    const auto a = ego_maneuver_probabilities(c, 0.0);
    const auto b = ego_maneuver_probabilities(scaled, 0.0);
    EXPECT_EQ(std::max_element(a.begin(), a.end()) - a.begin(),
              std::max_element(b.begin(), b.end()) - b.begin());
    EXPECT_NEAR(a[0] + a[1] + a[2], 1.0, 1e-12);
  }
}

TEST(DirectVehicle, LaneFlags) {
  const double w = 3.75;
  EXPECT_EQ(occupancy_lane_flags({50, 1.875, 4.3, 1.8}, w), (std::array<bool, 3>{true, false, false}));
  EXPECT_EQ(occupancy_lane_flags({50, 5.625, 4.3, 1.8}, w), (std::array<bool, 3>{false, true, false}));
  EXPECT_EQ(occupancy_lane_flags({50, 9.375, 4.3, 1.8}, w), (std::array<bool, 3>{false, false, true}));
  // Straddling the lane 1 / lane 2 boundary.
  EXPECT_EQ(occupancy_lane_flags({50, 3.75, 4.3, 1.8}, w), (std::array<bool, 3>{true, true, false}));
}

TEST(DirectVehicle, RelevantLanes) {
  const DvSettings s;
  const double w = 3.75;
  EXPECT_EQ(relevant_lanes(Maneuver::VT1, 1.875, 0, w, s), (std::array<bool, 3>{true, false, false}));
  EXPECT_EQ(relevant_lanes(Maneuver::VT2, 1.875, 0, w, s), (std::array<bool, 3>{true, true, false}));
  EXPECT_EQ(relevant_lanes(Maneuver::VT2, 5.625, 0, w, s), (std::array<bool, 3>{false, true, false}));
  EXPECT_EQ(relevant_lanes(Maneuver::VT3, 5.625, 0, w, s), (std::array<bool, 3>{false, true, true}));
  EXPECT_EQ(relevant_lanes(Maneuver::VT2, 9.375, 0, w, s), (std::array<bool, 3>{false, true, true}));
  // Lane 1 near its left edge and heading left counts lane 2 as well.
  EXPECT_EQ(relevant_lanes(Maneuver::VT1, 3.7, 0.02, w, s), (std::array<bool, 3>{true, true, false}));
}

TEST(DirectVehicle, NearestRearEdgeInRelevantLanes) {
  const double w = 3.75;
  const auto same = constant_rects("same", 60.0, 1.875, 4.3, 1.8);
  const auto near_other = constant_rects("other", 30.0, 5.625, 4.3, 1.8);
  const auto behind = constant_rects("behind", -10.0, 1.875, 4.3, 1.8);
  const std::vector<SvObstacle> obs{{60.0, &same}, {30.0, &near_other}, {-10.0, &behind}};
  const DvSettings s;
  const auto keep = extract_dv(Maneuver::VT1, 0.0, 1.875, 0.0, obs, w, s);
  const auto change = extract_dv(Maneuver::VT2, 0.0, 1.875, 0.0, obs, w, s);
  ASSERT_EQ(keep.x.size(), std::size_t(kN));
  for (int t = 0; t < kN; ++t) {
    EXPECT_DOUBLE_EQ(keep.x[t], 60.0 - 2.15);
    EXPECT_DOUBLE_EQ(change.x[t], 30.0 - 2.15);
  }
  const auto none = extract_dv(Maneuver::VT1, 0.0, 1.875, 0.0, {}, w, s);
  for (int t = 0; t < kN; ++t) EXPECT_FALSE(none.finite(t));
}

TEST(PlanStep, DirectVehicleTightensWithSafetyAwareness) {
  // A slower SV ahead in the ego lane. Smaller epsilon gives larger
  // rectangles, so the DV rear edge moves closer; the deterministic
  // rectangle is the tightest bound from the other side.
  Predictor pred(PredictorSettings{}, library(), LaneGeometry{});
  const auto preds = pred.predict({{"lead", {45, 20, 0, 1.875, 0, 0}}});
  const Vec8 ego = ego_state(0, 27, 1.875);
  PlanningContext ctx;
  auto dv_for = [&](PlannerKind kind, double eps) {
    PlanningContext c = ctx;
    c.params.kind = kind;
    c.params.epsilon = eps;
    Rng rng(11);
    return plan_step(ego, preds, library(), c, rng).dv;
  };
  const auto det = dv_for(PlannerKind::Deterministic, 0.2);
  std::vector<DvTrack> isa;
  for (double eps : {0.1, 0.3, 0.6, 0.9}) isa.push_back(dv_for(PlannerKind::Isa, eps));
  for (int t = 0; t < kN; ++t) {
    ASSERT_TRUE(det.finite(t));
    for (std::size_t i = 0; i < isa.size(); ++i) {
      ASSERT_TRUE(isa[i].finite(t));
      EXPECT_GE(det.x[t], isa[i].x[t] - 1e-9) << "t = " << t;
      if (i > 0) {
        EXPECT_GE(isa[i].x[t], isa[i - 1].x[t] - 1e-9) << "t = " << t << " i = " << i;
      }
    }
  }
}

TEST(PlanStep, EmptyRoadKeepsLaneAtNominalSpeed) {
  PlanningContext ctx;
  Rng rng(1);
  const Vec8 ego = ego_state(0, ctx.geometry.nominal(1), 1.875);
  const auto out = plan_step(ego, {}, library(), ctx, rng);
  EXPECT_EQ(out.target.maneuver, Maneuver::VT1);
  EXPECT_EQ(out.plan.status, SolverStatus::Converged);
  for (const auto& u : out.plan.inputs) EXPECT_LT(u.cwiseAbs().maxCoeff(), 1e-6);
  for (int t = 0; t < kN; ++t) EXPECT_FALSE(out.dv.finite(t));
}
