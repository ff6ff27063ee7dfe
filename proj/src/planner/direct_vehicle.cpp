#include "isa/planner/direct_vehicle.hpp"

#include <cmath>
#include <limits>

namespace isa {

std::array<bool, 3> occupancy_lane_flags(const OccupancyRect& r, double w) {
  const int lo = lane_index_clamped(r.oy - 0.5 * r.width, w);
  const int mid = lane_index_clamped(r.oy, w);
  const int hi = lane_index_clamped(r.oy + 0.5 * r.width, w);
  return {lo == 1 || mid == 1, lo == 2 || mid == 2 || hi == 2, mid == 3 || hi == 3};
}

std::array<bool, 3> relevant_lanes(Maneuver m, double y, double phi, double w,
                                   const DvSettings& cfg) {
  const int lane = lane_index_clamped(y - cfg.zeta, w);
  const double dy = y - (lane - 0.5) * w;
  const bool drifting_left = phi >= cfg.lambda_phi && dy >= cfg.lambda_y;
  const bool drifting_right = phi <= -cfg.lambda_phi && dy <= -cfg.lambda_y;
  if (lane == 1) {
    if (m == Maneuver::VT2 || drifting_left) return {true, true, false};
    return {true, false, false};
  }
  if (lane == 2) {
    if (m == Maneuver::VT1 || drifting_right) return {true, true, false};
    if (m == Maneuver::VT3 || drifting_left) return {false, true, true};
    return {false, true, false};
  }
  if (m == Maneuver::VT2 || drifting_right) return {false, true, true};
  return {false, false, true};
}

DvTrack extract_dv(Maneuver m, double ego_x, double ego_y, double ego_phi,
                   const std::vector<SvObstacle>& obstacles, double w, const DvSettings& cfg) {
  const auto lanes = relevant_lanes(m, ego_y, ego_phi, w, cfg);
  DvTrack dv;
  dv.x.assign(cfg.horizon, std::numeric_limits<double>::infinity());
  for (const auto& ob : obstacles) {
    if (!(ob.x_now > ego_x)) continue;
    const auto& rects = ob.occupancy->rects;
    const std::size_t steps = std::min<std::size_t>(cfg.horizon, rects.size());
    for (std::size_t t = 0; t < steps; ++t) {
      const auto flags = occupancy_lane_flags(rects[t], w);
      bool applies = false;
      for (int l = 0; l < 3; ++l) applies = applies || (flags[l] && lanes[l]);
      if (applies) dv.x[t] = std::min(dv.x[t], rects[t].ox - 0.5 * rects[t].length);
    }
  }
  return dv;
}

}  // namespace isa
