#pragma once

#include <vector>

#include "isa/occupancy/occupancy.hpp"
#include "isa/planner/direct_vehicle.hpp"
#include "isa/planner/moving_target.hpp"
#include "isa/planner/ocp.hpp"
#include "isa/predictor/predictor.hpp"
#include "isa/world/scenario.hpp"

namespace isa {

/// Constant data of the EV planner.
struct PlanningContext {
  int horizon = 25;
  double T = 0.32;
  LaneGeometry geometry;
  VehicleShape shape;
  EgoParams ego;
  PlannerParams params;
};
PlanningContext planning_context(const ScenarioConfig& config);

struct PlanOutput {
  std::vector<SvOccupancy> occupancy;  // rectangles fed to targets and DVs
  MovingTarget target;
  DvTrack dv;
  PlanResult plan;
  double occupancy_time = 0.0;  // seconds
};

/// One planning step on given predictions: occupancy for the configured
/// planner kind, moving targets, DV extraction, OCP. Draws from `rng` for
/// the STD sampling (ISA) or the sampled scenarios (SCMPC).
PlanOutput plan_step(const Vec8& ego, const PredictionSet& predictions, const GainLibrary& gains,
                     const PlanningContext& ctx, Rng& rng, const std::vector<Input>& warm = {});

OcpProblem make_ocp_problem(const Vec8& ego, const MovingTarget& target, const DvTrack& dv,
                            const PlanningContext& ctx);

/// Stateful receding-horizon planner: owns the predictor filters and the
/// previous solution used for warm starts.
class EgoPlanner {
 public:
  EgoPlanner(PlanningContext ctx, PredictorSettings predictor, const GainLibrary& gains);

  struct Step {
    PredictionSet predictions;
    PlanOutput output;
    double planning_time = 0.0;  // prediction + occupancy + targets + OCP, seconds
  };
  Step plan(const Vec8& ego, const std::vector<SvObservation>& svs, Rng& rng);

  const PlanningContext& context() const { return ctx_; }

 private:
  PlanningContext ctx_;
  const GainLibrary* gains_;
  Predictor predictor_;
  PlanResult previous_;
  bool has_previous_ = false;
};

}  // namespace isa
