#include "isa/world/lanes.hpp"

#include <algorithm>
#include <cmath>

namespace isa {

void LaneGeometry::validate() const {
  if (!(lane_width > 0.0) || !std::isfinite(lane_width)) {
    throw ValidationError("lane_width must be > 0");
  }
  for (double v : nominal_speed) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("nominal_speed must be > 0 for every lane");
    }
  }
}

int lane_index_clamped(double y, double lane_width) {
  const double idx = std::ceil(y / lane_width);
  return static_cast<int>(std::clamp(idx, 1.0, double(LaneGeometry::kLaneCount)));
}

int lane_of(double y, const LaneGeometry& geometry, double margin) {
  if (!std::isfinite(y) || y < 0.0 || y > geometry.road_width()) {
    throw std::out_of_range("lateral position " + std::to_string(y) + " is off the road");
  }
  return lane_index_clamped(y - margin, geometry.lane_width);
}

namespace {
constexpr std::array<std::string_view, 10> kNames{"m0", "m1", "m2", "m3",  "m4",
                                                  "m5", "m6", "VT1", "VT2", "VT3"};
constexpr std::array<Maneuver, 2> kLane1{Maneuver::M0, Maneuver::M1};
constexpr std::array<Maneuver, 3> kLane2{Maneuver::M2, Maneuver::M3, Maneuver::M4};
constexpr std::array<Maneuver, 2> kLane3{Maneuver::M5, Maneuver::M6};
}  // namespace

std::string_view to_string(Maneuver m) { return kNames[static_cast<int>(m)]; }

Maneuver maneuver_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Maneuver>(i);
  }
  throw std::invalid_argument("unknown maneuver '" + std::string(name) + "'");
}

bool is_sv_maneuver(Maneuver m) { return static_cast<int>(m) <= static_cast<int>(Maneuver::M6); }

bool is_lane_keep(Maneuver m) {
  return m == Maneuver::M0 || m == Maneuver::M3 || m == Maneuver::M6;
}

int origin_lane(Maneuver m) {
  switch (m) {
    case Maneuver::M0:
    case Maneuver::M1: return 1;
    case Maneuver::M2:
    case Maneuver::M3:
    case Maneuver::M4: return 2;
    case Maneuver::M5:
    case Maneuver::M6: return 3;
    default: throw std::invalid_argument("origin_lane: EV maneuvers have no origin lane");
  }
}

int target_lane(Maneuver m) {
  switch (m) {
    case Maneuver::M0: return 1;
    case Maneuver::M1: return 2;
    case Maneuver::M2: return 1;
    case Maneuver::M3: return 2;
    case Maneuver::M4: return 3;
    case Maneuver::M5: return 2;
    case Maneuver::M6: return 3;
    case Maneuver::VT1: return 1;
    case Maneuver::VT2: return 2;
    case Maneuver::VT3: return 3;
  }
  return 0;
}

std::span<const Maneuver> admissible_maneuvers(int lane) {
  switch (lane) {
    case 1: return kLane1;
    case 2: return kLane2;
    case 3: return kLane3;
    default: throw std::out_of_range("lane index must be 1..3");
  }
}

Maneuver sv_maneuver_between(int from, int to) {
  for (Maneuver m : admissible_maneuvers(from)) {
    if (target_lane(m) == to) return m;
  }
  throw std::invalid_argument("no maneuver from lane " + std::to_string(from) + " to lane " +
                              std::to_string(to));
}

}  // namespace isa
