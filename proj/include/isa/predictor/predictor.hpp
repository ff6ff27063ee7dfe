#pragma once

#include <map>
#include <string>
#include <vector>

#include "isa/predictor/mode_filter.hpp"
#include "isa/predictor/priority.hpp"
#include "isa/predictor/references.hpp"
#include "isa/primitives/gain_set.hpp"
#include "isa/world/scenario.hpp"

namespace isa {

struct CostWeights {
  double w_x = 0.1;
  double w_y = 0.3;
  double w_v = 0.1;
  double w_l = 0.5;
};

/// Rollout of a primitive model with the maneuver cost
///   sum_{t=k..k+N} (W_x ax_t^2 + W_y ay_t^2) + W_v (vx_k - v_ref)^2 + W_l (y_k - y_ref)^2.
struct NominalRollout {
  std::vector<SvState> states;  // t = k+1..k+N
  double cost = 0.0;
};
NominalRollout nominal_rollout(const SvState& state, const PrimitiveModel& model, int horizon,
                               const CostWeights& weights);

struct PredictorSettings {
  int horizon = 25;
  double T = 0.32;
  double tau_h = 1.5;
  VehicleShape shape;
  CostWeights weights;
  double varsigma = 1e-4;
  PredictorParams noise;
};
PredictorSettings predictor_settings(const ScenarioConfig& config);

struct ManeuverPrediction {
  Maneuver maneuver = Maneuver::M0;
  double probability = 0.0;
  double v_ref = 0.0;
  double y_ref = 0.0;
  bool reference_infeasible = false;
  double cost = 0.0;
  double log_likelihood = 0.0;
  std::vector<double> x;  // nominal positions, t = k+1..k+N
  std::vector<double> y;
};

struct SvPrediction {
  std::string id;
  SvState state;
  int lane = 1;
  std::vector<ManeuverPrediction> modes;  // admissible maneuvers in index order

  /// Largest probability; ties go to the lower maneuver index.
  const ManeuverPrediction& most_probable() const;
  const ManeuverPrediction& mode(Maneuver m) const;
};

/// Predictions of one step, in priority order.
struct PredictionSet {
  std::vector<SvPrediction> svs;
  const SvPrediction& sv(const std::string& id) const;
};

/// Sequential multi-modal predictor with one Kalman filter per (SV,
/// maneuver). Stateful: filters carry over between calls and are restarted
/// when an SV changes lane or first appears.
class Predictor {
 public:
  Predictor(PredictorSettings settings, const GainLibrary& gains, LaneGeometry geometry);

  PredictionSet predict(const std::vector<SvObservation>& svs);
  void reset() { banks_.clear(); }

  const PredictorSettings& settings() const { return settings_; }
  const GainLibrary& gains() const { return *gains_; }
  const LaneGeometry& geometry() const { return geometry_; }

 private:
  struct Bank {
    int lane = 0;
    std::vector<ModeFilter> filters;
    std::vector<PrimitiveModel> last_models;
  };

  PredictorSettings settings_;
  const GainLibrary* gains_;
  LaneGeometry geometry_;
  std::map<std::string, Bank> banks_;
};

/// JSON dump of one step's predictions (see docs/outputs.md).
std::string predictions_to_json(const PredictionSet& set, int step);

}  // namespace isa
