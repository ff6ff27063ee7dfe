#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isa {

/// Raised when an input file cannot be parsed; carries the location.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// Raised when a parsed value violates a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Straight three-lane road. Lane i (1-based) spans
/// y in [(i-1) w, i w]; y = 0 is the right road edge.
struct LaneGeometry {
  static constexpr int kLaneCount = 3;
  double lane_width = 3.75;
  std::array<double, kLaneCount> nominal_speed{65.0 / 3.6, 90.0 / 3.6, 90.0 / 3.6};

  double center(int lane) const { return (lane - 0.5) * lane_width; }
  double road_width() const { return kLaneCount * lane_width; }
  double nominal(int lane) const { return nominal_speed.at(lane - 1); }

  void validate() const;
  bool operator==(const LaneGeometry&) const = default;
};

/// Lane index via ceil((y - margin) / w). Throws std::out_of_range when y is
/// off the road. Results are clamped to [1, 3], so y = 0 maps to lane 1.
int lane_of(double y, const LaneGeometry& geometry, double margin = 0.0);

/// Unchecked ceil(y / w) clamped to [1, 3]; used on occupancy edges, which
/// may legitimately extend past the road boundary.
int lane_index_clamped(double y, double lane_width);

/// Ground-frame state of a surrounding vehicle, [x vx ax y vy ay].
struct SvState {
  double x = 0.0;
  double vx = 0.0;
  double ax = 0.0;
  double y = 0.0;
  double vy = 0.0;
  double ay = 0.0;

  bool operator==(const SvState&) const = default;
};

/// SV maneuvers m0..m6 (lane dependent) and EV velocity-tracking maneuvers.
///   lane 1: m0 keep, m1 change to lane 2
///   lane 2: m2 change to lane 1, m3 keep, m4 change to lane 3
///   lane 3: m5 change to lane 2, m6 keep
enum class Maneuver { M0, M1, M2, M3, M4, M5, M6, VT1, VT2, VT3 };

inline constexpr std::array<Maneuver, 7> kSvManeuvers{
    Maneuver::M0, Maneuver::M1, Maneuver::M2, Maneuver::M3,
    Maneuver::M4, Maneuver::M5, Maneuver::M6};
inline constexpr std::array<Maneuver, 3> kEvManeuvers{Maneuver::VT1, Maneuver::VT2,
                                                      Maneuver::VT3};

std::string_view to_string(Maneuver m);
Maneuver maneuver_from_string(std::string_view name);

bool is_sv_maneuver(Maneuver m);
bool is_lane_keep(Maneuver m);
int origin_lane(Maneuver m);  // SV maneuvers only
int target_lane(Maneuver m);  // all maneuvers
/// Admissible SV maneuvers from a lane, in index order.
std::span<const Maneuver> admissible_maneuvers(int lane);
/// The SV maneuver moving from `from` to `to` (|from - to| <= 1).
Maneuver sv_maneuver_between(int from, int to);

/// Common footprint of every vehicle on the road.
struct VehicleShape {
  double length = 4.3;
  double width = 1.8;
  bool operator==(const VehicleShape&) const = default;
};

inline constexpr double kmh_to_ms(double kmh) { return kmh / 3.6; }
inline constexpr double ms_to_kmh(double ms) { return ms * 3.6; }

}  // namespace isa
