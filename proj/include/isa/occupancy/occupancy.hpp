#pragma once

#include <map>
#include <string>
#include <vector>

#include "isa/occupancy/gmm.hpp"
#include "isa/predictor/predictor.hpp"
#include "isa/uncertainty/quantify.hpp"

namespace isa {

/// Rectangles of one SV for t = k+1..k+N.
struct SvOccupancy {
  std::string sv;
  std::vector<OccupancyRect> rects;
};

/// STD tracks per SV id, aligned with the SV's prediction modes.
using UncertaintySet = std::map<std::string, std::vector<StdTrack>>;

/// Sampled STD tracks for every (SV, mode) of a prediction set.
UncertaintySet quantify_all(const PredictionSet& predictions, const GainLibrary& gains, int k_sam,
                            int horizon, double T, Rng& rng);

struct OccupancySettings {
  double epsilon = 0.2;
  GridSpec grid;
  double sigma_floor = 0.05;
  VehicleShape shape;
};

/// Mixture of one SV at horizon step t (0-based).
GmmSlice assemble_slice(const SvPrediction& sv, const std::vector<StdTrack>& tracks, int t,
                        double sigma_floor);

/// Safety-aware occupancy: epsilon level set of the mixture, dilated.
/// Throws std::out_of_range naming (sv, maneuver, t) for missing STD data.
std::vector<SvOccupancy> build_occupancy(const PredictionSet& predictions,
                                         const UncertaintySet& uncertainty,
                                         const OccupancySettings& settings);

/// Sampled-scenario occupancy. Each SV draws from its own sub-stream seeded
/// by one value taken from `rng`, so runs with a larger k_sc extend the
/// draws of a smaller one. Per draw: maneuver from the mode probabilities,
/// then a lon and a lat gain index.
struct ScenarioSamples {
  std::vector<SvOccupancy> raw;      // per-step bounding boxes of the samples
  std::vector<SvOccupancy> dilated;  // raw dilated by the vehicle shape
  std::map<std::string, std::vector<Rollout>> rollouts;
};
ScenarioSamples scmpc_occupancy(const PredictionSet& predictions, const GainLibrary& gains, int k_sc,
                                const VehicleShape& shape, int horizon, double T, Rng& rng);

/// Most-probable nominal trajectory dilated by the vehicle shape only.
std::vector<SvOccupancy> deterministic_occupancy(const PredictionSet& predictions,
                                                 const VehicleShape& shape);

}  // namespace isa
