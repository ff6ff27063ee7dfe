#include "isa/planner/planner.hpp"

#include <chrono>

namespace isa {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

PlanningContext planning_context(const ScenarioConfig& c) {
  PlanningContext ctx;
  ctx.horizon = c.horizon;
  ctx.T = c.dt;
  ctx.geometry = c.road;
  ctx.shape = c.shape;
  ctx.ego = {c.lf, c.lr};
  ctx.params = c.planner;
  return ctx;
}

OcpProblem make_ocp_problem(const Vec8& ego, const MovingTarget& target, const DvTrack& dv,
                            const PlanningContext& ctx) {
  const auto& P = ctx.params;
  OcpProblem p;
  p.xi0 = ego;
  p.ego = ctx.ego;
  p.horizon = ctx.horizon;
  p.T = ctx.T;
  p.v_ref = target.v_ref;
  p.y_ref = target.y_ref;
  p.x_dv = dv.x;
  p.q1 = P.q1;
  p.q2 = P.q2;
  p.q3 = P.q3;
  p.q4 = P.q4;
  p.q5_y = P.q5[0];
  p.q5_v = P.q5[1];
  p.q6 = P.q6;
  p.delta_max = P.delta_max;
  p.accel_min = P.accel_min;
  p.accel_max = P.accel_max;
  p.speed_min = P.speed_min;
  p.tau_h = P.tau_h_ocp;
  p.vehicle_length = ctx.shape.length;
  return p;
}

PlanOutput plan_step(const Vec8& ego, const PredictionSet& predictions, const GainLibrary& gains,
                     const PlanningContext& ctx, Rng& rng, const std::vector<Input>& warm) {
  const auto& P = ctx.params;
  PlanOutput out;

  const auto t0 = std::chrono::steady_clock::now();
  switch (P.kind) {
    case PlannerKind::Isa: {
      const auto unc = quantify_all(predictions, gains, P.k_sam, ctx.horizon, ctx.T, rng);
      const OccupancySettings os{P.epsilon, {P.grid_dx, P.grid_dy}, P.sigma_floor, ctx.shape};
      out.occupancy = build_occupancy(predictions, unc, os);
      break;
    }
    case PlannerKind::Scmpc:
      out.occupancy =
          scmpc_occupancy(predictions, gains, P.k_sc, ctx.shape, ctx.horizon, ctx.T, rng).dilated;
      break;
    case PlannerKind::Deterministic:
      out.occupancy = deterministic_occupancy(predictions, ctx.shape);
      break;
  }
  out.occupancy_time = seconds_since(t0);

  const auto obstacles = obstacles_of(out.occupancy, predictions);
  MovingTargetSettings ms;
  ms.horizon = ctx.horizon;
  ms.T = ctx.T;
  ms.tau_h = P.tau_h_target;
  ms.shape = ctx.shape;
  ms.weights = {P.w_x, P.w_y, P.w_v, P.w_l};
  ms.varsigma = P.varsigma;
  ms.k_lon = Vec2(P.k_lon_ev[0], P.k_lon_ev[1]);
  ms.k_lat = Vec3(P.k_lat_ev[0], P.k_lat_ev[1], P.k_lat_ev[2]);
  out.target = ego_maneuver_targets(ego, ctx.ego, obstacles, ctx.geometry, ms);

  const DvSettings ds{P.zeta_ev, P.lambda_phi, P.lambda_y, ctx.horizon};
  out.dv = extract_dv(out.target.maneuver, ego(ego::X), ego(ego::Y), ego(ego::PHI), obstacles,
                      ctx.geometry.lane_width, ds);

  SqpOptions so;
  so.max_iterations = P.max_iterations;
  out.plan = solve_ocp(make_ocp_problem(ego, out.target, out.dv, ctx), warm, so);
  return out;
}

EgoPlanner::EgoPlanner(PlanningContext ctx, PredictorSettings predictor, const GainLibrary& gains)
    : ctx_(std::move(ctx)), gains_(&gains), predictor_(std::move(predictor), gains, ctx_.geometry) {}

EgoPlanner::Step EgoPlanner::plan(const Vec8& ego, const std::vector<SvObservation>& svs, Rng& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  Step s;
  s.predictions = predictor_.predict(svs);
  const auto warm = has_previous_ ? shifted_inputs(previous_, ctx_.horizon) : std::vector<Input>{};
  s.output = plan_step(ego, s.predictions, *gains_, ctx_, rng, warm);
  previous_ = s.output.plan;
  has_previous_ = true;
  s.planning_time = seconds_since(t0);
  return s;
}

}  // namespace isa
