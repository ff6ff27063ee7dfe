#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "isa/primitives/clusters.hpp"
#include "isa/primitives/identification.hpp"

namespace isa {

/// Identified feedback-gain samples of one maneuver and their means.
struct GainSet {
  Maneuver maneuver = Maneuver::M0;
  std::vector<Vec2> lon_gains;
  std::vector<Vec3> lat_gains;
  Vec2 mean_lon = Vec2::Zero();
  Vec3 mean_lat = Vec3::Zero();
  double lane_keep_sigma_y = 0.0;  // cluster lateral STD (lane-keep maneuvers)
  int warnings = 0;                // trajectories whose fit did not improve

  /// Recomputes the means; throws if either set is empty or sizes differ.
  void finalize();
};

/// Gain sets for all SV maneuvers, indexed by maneuver.
class GainLibrary {
 public:
  GainLibrary() = default;
  explicit GainLibrary(std::vector<GainSet> sets);

  const GainSet& at(Maneuver m) const;
  bool contains(Maneuver m) const;
  const std::vector<GainSet>& sets() const { return sets_; }

 private:
  std::vector<GainSet> sets_;
};

/// Identifies one gain pair per trajectory. Throws on an empty cluster.
GainSet build_gain_set(const TrajectoryCluster& cluster, const IdentificationOptions& options = {});

/// One GainSet per cluster.
GainLibrary build_gain_sets(const std::vector<TrajectoryCluster>& clusters,
                            const IdentificationOptions& options = {});

/// Synthesize clusters, normalize them, identify. Deterministic in `seed`.
GainLibrary identify_synthetic(std::uint64_t seed, const LaneGeometry& geometry, double T,
                               int trajectories_per_maneuver);

/// Gain cache (JSON) keyed by maneuver name, carrying the metadata it was
/// built with so stale caches can be detected.
struct GainCacheMeta {
  double T = 0.32;
  std::uint64_t seed = 0;
  int trajectories = 0;
  std::string source = "synthetic";
  bool operator==(const GainCacheMeta&) const = default;
};
void save_gain_cache(const std::filesystem::path& path, const GainLibrary& library,
                     const GainCacheMeta& meta);
std::pair<GainLibrary, GainCacheMeta> load_gain_cache(const std::filesystem::path& path);

}  // namespace isa
