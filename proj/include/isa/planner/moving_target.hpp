#pragma once

#include <array>
#include <string>
#include <vector>

#include "isa/occupancy/occupancy.hpp"
#include "isa/planner/ego_model.hpp"
#include "isa/predictor/predictor.hpp"

namespace isa {

/// Evaluation of one EV velocity-tracking maneuver.
struct EgoManeuverOption {
  Maneuver maneuver = Maneuver::VT1;
  double v_ref = 0.0;
  double y_ref = 0.0;
  double cost = 0.0;
  double probability = 0.0;
  bool constrained = false;
  bool infeasible = false;
  std::string binding_sv;  // SV whose rectangle limits v_ref, empty if none
};

struct MovingTarget {
  Maneuver maneuver = Maneuver::VT1;
  double v_ref = 0.0;
  double y_ref = 0.0;
  bool all_infeasible = false;
  std::array<EgoManeuverOption, 3> options;  // VT1, VT2, VT3

  const EgoManeuverOption& chosen() const;
};

struct MovingTargetSettings {
  int horizon = 25;
  double T = 0.32;
  double tau_h = 1.5;
  VehicleShape shape;
  CostWeights weights;
  double varsigma = 1e-4;
  Vec2 k_lon{0.1029, 0.3423};
  Vec3 k_lat{0.0984, 0.4656, 0.5417};
};

/// Occupancy of one SV together with its current position, which decides
/// whether it lies ahead of the EV.
struct SvObstacle {
  double x_now = 0.0;
  const SvOccupancy* occupancy = nullptr;
};

std::vector<SvObstacle> obstacles_of(const std::vector<SvOccupancy>& occupancy,
                                     const PredictionSet& predictions);

/// Maneuver probabilities p_m proportional to 1 / sqrt(J_m + varsigma).
std::array<double, 3> ego_maneuver_probabilities(const std::array<double, 3>& costs,
                                                 double varsigma);

/// Reference speed and lane per EV maneuver, with the most probable one
/// selected. Only SVs currently ahead of the EV constrain the speed. Exact
/// probability ties go to the current lane, then to the smaller lane change.
MovingTarget ego_maneuver_targets(const Vec8& ego, const EgoParams& ego_params,
                                  const std::vector<SvObstacle>& obstacles,
                                  const LaneGeometry& geometry,
                                  const MovingTargetSettings& settings);

}  // namespace isa
