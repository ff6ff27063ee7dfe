#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "isa/primitives/primitive_model.hpp"
#include "isa/world/lanes.hpp"

namespace isa {

/// One recorded maneuver: lateral positions and longitudinal speeds sampled
/// at the cluster interval. Lateral positions are relative to the origin
/// lane center, so lane changes to the left end near +w_lane.
struct RawTrajectory {
  std::vector<double> y;
  std::vector<double> vx;
  std::size_t size() const { return y.size(); }
  bool operator==(const RawTrajectory&) const = default;
};

struct TrajectoryCluster {
  Maneuver maneuver = Maneuver::M0;
  double T = 0.32;
  std::vector<RawTrajectory> trajectories;  // all of length steps()

  int steps() const { return trajectories.empty() ? 0 : int(trajectories.front().size()); }
  double duration() const { return steps() * T; }
};

/// Pads every trajectory to the longest one by holding its terminal lateral
/// position and speed. Throws std::invalid_argument on an empty input or on
/// a trajectory whose channels differ in length or are empty.
TrajectoryCluster normalize_cluster(Maneuver maneuver, std::vector<RawTrajectory> raw, double T);

/// Per-step sample standard deviation (n - 1) of the lateral positions.
std::vector<double> lateral_step_std(const TrajectoryCluster& cluster);

/// Synthetic raw cluster and the gains each trajectory was generated with.
struct SyntheticCluster {
  Maneuver maneuver = Maneuver::M0;
  std::vector<RawTrajectory> raw;
  std::vector<Vec2> k_lon;
  std::vector<Vec3> k_lat;
};

/// Generator settings. Weights are drawn log-uniformly within
/// [nominal / spread, nominal * spread] per diagonal entry; each trajectory
/// runs until both axes settle and then for a random number of extra steps.
struct SynthesisOptions {
  double T = 0.32;
  int trajectories = 40;
  Vec3 q_lat_nominal{0.1, 0.2, 0.2};
  Vec2 q_lon_nominal{0.05, 0.1};
  double q_spread = 3.0;
  double start_offset_std = 0.1;   // lane change: initial lateral offset
  double target_offset_std = 0.1;  // lane change: final offset from the lane center
  double keep_bias_std = 0.15;     // lane keep: lateral bias inside the lane
  double keep_start_std = 0.05;    // lane keep: initial deviation from the bias
  double speed_min = 18.0;
  double speed_max = 30.0;
  double speed_change_std = 1.5;
  int max_extra_steps = 10;
  int max_steps = 200;
};

/// One synthetic cluster per SV maneuver (m0..m6, in order). Bit-identical
/// for equal seeds.
std::vector<SyntheticCluster> synthesize_clusters(std::uint64_t seed, const LaneGeometry& geometry,
                                                  const SynthesisOptions& options = {});

/// Cluster CSV with header trajectory_id,step,y_meters,vx_meters_per_second.
void write_cluster_csv(const std::filesystem::path& path, const std::vector<RawTrajectory>& raw);
std::vector<RawTrajectory> read_cluster_csv(const std::filesystem::path& path);

}  // namespace isa
