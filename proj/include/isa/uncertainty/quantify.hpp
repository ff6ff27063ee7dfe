#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "isa/primitives/gain_set.hpp"

namespace isa {

using Rng = std::mt19937_64;

/// Per-step position standard deviations of one (SV, maneuver) pair over
/// t = k+1..k+N.
struct StdTrack {
  std::string sv;
  Maneuver maneuver = Maneuver::M0;
  std::vector<double> sigma_x;
  std::vector<double> sigma_y;
};

/// Rollouts of the primitive model with (lon, lat) gains drawn uniformly with
/// replacement and independently from `gains`. Draw order per sample: lon
/// index, then lat index.
std::vector<Rollout> sample_rollouts(const SvState& state, double v_ref, double y_ref,
                                     const GainSet& gains, int samples, int horizon, double T,
                                     Rng& rng);

/// Sample standard deviations (n - 1) of sampled rollouts. Requires k_sam >= 2.
StdTrack quantify(const SvState& state, double v_ref, double y_ref, const GainSet& gains,
                  int k_sam, int horizon, double T, Rng& rng);

/// As quantify, but lane-keep maneuvers replace sigma_y with the constant
/// cluster STD stored in the gain set.
StdTrack quantify_maneuver(const SvState& state, double v_ref, double y_ref, const GainSet& gains,
                           int k_sam, int horizon, double T, Rng& rng);

/// Mean over steps of the per-step lateral STD of a normalized cluster.
double lane_keep_std(const TrajectoryCluster& cluster);

/// CSV of sampled rollouts (sample, step, x, y) for plotting.
void write_rollouts_csv(const std::filesystem::path& path, const std::vector<Rollout>& rollouts);

}  // namespace isa
