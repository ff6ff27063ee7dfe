#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "isa/world/lanes.hpp"

namespace isa {

enum class PlannerKind { Isa, Scmpc, Deterministic };

std::string_view to_string(PlannerKind kind);
PlannerKind planner_kind_from_string(std::string_view name);

/// Everything the EV planner needs. Defaults are the published simulation
/// parameters.
struct PlannerParams {
  PlannerKind kind = PlannerKind::Isa;
  double epsilon = 0.2;  // safety-awareness level, (0, 1]
  int k_sc = 10;         // scenario count for the sampled-occupancy baseline
  int k_sam = 30;        // gain samples per maneuver for the STD tracks

  double tau_h_target = 1.5;  // time headway used for reference speeds
  double tau_h_ocp = 2.0;     // time headway of the soft OCP constraint

  // Maneuver-cost weights.
  double w_x = 0.1;
  double w_y = 0.3;
  double w_v = 0.1;
  double w_l = 0.5;
  double varsigma = 1e-4;

  // OCP weights.
  double q1 = 0.5;  // snap
  double q2 = 0.1;  // steering angular acceleration
  double q3 = 0.5;  // acceleration
  double q4 = 0.1;  // steering angle
  std::array<double, 2> q5{0.05, 1.0};  // terminal lateral / speed deviation
  double q6 = 0.055;                    // slack

  double delta_max = 0.8;
  double accel_min = -6.0;
  double accel_max = 6.0;
  double speed_min = 0.0;
  int max_iterations = 100;

  // Direct-vehicle extraction.
  double zeta_ev = 0.5;
  double lambda_phi = 0.015;
  double lambda_y = 1.8;

  // Fixed EV feedback gains for the reference-speed rollouts.
  std::array<double, 2> k_lon_ev{0.1029, 0.3423};
  std::array<double, 3> k_lat_ev{0.0984, 0.4656, 0.5417};

  // Occupancy grid.
  double grid_dx = 0.1;
  double grid_dy = 0.05;
  double sigma_floor = 0.05;

  bool operator==(const PlannerParams&) const = default;
};

/// Noise levels (standard deviations) of the per-maneuver Kalman filters.
struct PredictorParams {
  std::array<double, 6> process_std{0.1, 0.1, 0.1, 0.1, 0.1, 0.1};
  std::array<double, 3> measurement_std{0.2, 0.2, 0.1};  // x, vx, y
  bool operator==(const PredictorParams&) const = default;
};

/// Where the identified gain sets come from: a cache file, a directory of
/// cluster CSVs (m0.csv .. m6.csv), or synthetic clusters from `seed`.
struct GainSource {
  std::uint64_t seed = 2023;
  int trajectories_per_maneuver = 40;
  std::string cache_path;
  std::string cluster_dir;
  bool operator==(const GainSource&) const = default;
};

enum class VehicleRole { Ego, ScriptedSv, ClosedLoopSv };

std::string_view to_string(VehicleRole role);

/// Initial condition and behavior flags of one vehicle.
///   ScriptedSv: holds its initial speed except during acceleration events.
///   ClosedLoopSv: tracks the lane nominal speed, yielding to higher-priority
///   SVs ahead (interaction-aware reference inference).
/// Both SV kinds move laterally with the feedback model of their current
/// maneuver. EV yaw and steering start at zero.
struct VehicleSpec {
  std::string id;
  VehicleRole role = VehicleRole::ClosedLoopSv;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;  // m/s
  bool resample_gains = false;
  bool operator==(const VehicleSpec&) const = default;
};

enum class EventKind { Acceleration, LaneChange };
enum class TriggerKind { AtStep, Headway };

/// Scripted disturbance.
///   Acceleration: piecewise-constant longitudinal acceleration override
///   starting at `step` for `duration_steps` steps (-1: until the end).
///   LaneChange: switches the vehicle to the lane-change maneuver toward
///   `target_lane`, either at `step` or once its time headway to the
///   same-lane leader drops below `headway`. `target_speed` (m/s) optionally
///   replaces the speed reference from then on.
struct ScriptEvent {
  std::string vehicle;
  EventKind kind = EventKind::Acceleration;
  TriggerKind trigger = TriggerKind::AtStep;
  int step = 0;
  double headway = 1.0;
  double acceleration = 0.0;
  int duration_steps = -1;
  int target_lane = 0;
  std::optional<double> target_speed;
  bool operator==(const ScriptEvent&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  LaneGeometry road;
  VehicleShape shape;
  double lf = 1.477;
  double lr = 1.446;
  int horizon = 25;  // N
  double dt = 0.32;  // T
  int steps = 40;
  std::uint64_t seed = 1;
  std::vector<VehicleSpec> vehicles;
  std::vector<ScriptEvent> events;
  PlannerParams planner;
  PredictorParams predictor;
  GainSource gains;
  std::string med_vehicle;  // SV whose distance to the EV is tracked

  void validate() const;
  const VehicleSpec& ego() const;
  std::vector<const VehicleSpec*> surrounding() const;
  bool operator==(const ScenarioConfig&) const = default;
};

/// Parse and validate a scenario file (JSON with nested objects; see
/// docs/scenario_format.md). Throws ParseError or ValidationError.
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin = "<string>");
std::string serialize_scenario(const ScenarioConfig& config);

}  // namespace isa
