#pragma once

#include <vector>

#include "isa/primitives/primitive_model.hpp"
#include "isa/world/lanes.hpp"

namespace isa {

/// Linear constraint coef * v <= rhs on a scalar reference speed.
struct SpeedConstraint {
  double coef = 0.0;
  double rhs = 0.0;
};

struct SpeedSolution {
  double speed = 0.0;
  bool constrained = false;  // optimum differs from the anchor
  bool infeasible = false;   // no v >= 0 satisfies every constraint; speed = 0
};

/// argmin (v - anchor)^2 over v >= 0 subject to the constraints: the
/// projection of the anchor onto the feasible interval.
SpeedSolution project_speed(double anchor, const std::vector<SpeedConstraint>& constraints);

/// Predicted positions of a vehicle that a lower-priority SV has to respect.
struct OccupantTrack {
  double x0 = 0.0;         // current longitudinal position
  std::vector<double> x;   // t = k+1..k+N
  std::vector<double> y;
};

struct ReferenceSettings {
  int horizon = 25;
  double T = 0.32;
  double tau_h = 1.5;
  VehicleShape shape;
};

struct SvReferences {
  double v_ref = 0.0;
  double y_ref = 0.0;
  SpeedSolution solution;
};

/// Target speed and lane of maneuver m for an SV with nominal gains (k_lon,
/// k_lat). The lateral target is the maneuver's target lane center; the
/// speed stays as close as possible to that lane's nominal speed while
/// keeping x_t + v*tau_h + l_veh <= x_h,t whenever |y_t - y_h,t| <= w_veh
/// for each higher-priority vehicle h currently ahead. Positions are affine
/// in v, obtained from two rollouts.
SvReferences infer_references(const SvState& state, Maneuver m, const Vec2& k_lon,
                              const Vec3& k_lat, const std::vector<OccupantTrack>& higher,
                              const LaneGeometry& geometry, const ReferenceSettings& settings);

}  // namespace isa
