#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "isa/planner/moving_target.hpp"

namespace isa {

/// Longitudinal position of the direct vehicle per horizon step; +inf when
/// no rectangle applies.
struct DvTrack {
  std::vector<double> x;
  bool finite(std::size_t t) const { return std::isfinite(x[t]); }
};

struct DvSettings {
  double zeta = 0.5;        // margin on the EV lateral position
  double lambda_phi = 0.015;
  double lambda_y = 1.8;
  int horizon = 25;
};

/// Lane flags of one rectangle from the ceiling tests on its edges and center.
std::array<bool, 3> occupancy_lane_flags(const OccupancyRect& r, double lane_width);

/// Lanes whose rectangles are considered for an EV at (y, phi) pursuing m.
std::array<bool, 3> relevant_lanes(Maneuver m, double y, double phi, double lane_width,
                                   const DvSettings& settings);

/// Direct-vehicle extraction over SVs currently ahead of the EV: per step,
/// the smallest rear-edge position o_x - L/2 among rectangles flagged in a
/// relevant lane.
DvTrack extract_dv(Maneuver m, double ego_x, double ego_y, double ego_phi,
                   const std::vector<SvObstacle>& obstacles, double lane_width,
                   const DvSettings& settings);

}  // namespace isa
