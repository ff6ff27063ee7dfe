#include "isa/predictor/predictor.hpp"

#include <stdexcept>

#include "json.hpp"

namespace isa {

NominalRollout nominal_rollout(const SvState& state, const PrimitiveModel& model, int horizon,
                               const CostWeights& w) {
  NominalRollout r;
  r.states.reserve(horizon);
  double acc = w.w_x * state.ax * state.ax + w.w_y * state.ay * state.ay;
  SvState s = state;
  for (int t = 0; t < horizon; ++t) {
    s = step_primitive(s, model);
    r.states.push_back(s);
    acc += w.w_x * s.ax * s.ax + w.w_y * s.ay * s.ay;
  }
  const double dv = state.vx - model.v_ref;
  const double dy = state.y - model.y_ref;
  r.cost = acc + w.w_v * dv * dv + w.w_l * dy * dy;
  return r;
}

PredictorSettings predictor_settings(const ScenarioConfig& c) {
  PredictorSettings s;
  s.horizon = c.horizon;
  s.T = c.dt;
  s.tau_h = c.planner.tau_h_target;
  s.shape = c.shape;
  s.weights = {c.planner.w_x, c.planner.w_y, c.planner.w_v, c.planner.w_l};
  s.varsigma = c.planner.varsigma;
  s.noise = c.predictor;
  return s;
}

const ManeuverPrediction& SvPrediction::most_probable() const {
  if (modes.empty()) throw std::logic_error("SvPrediction without modes");
  std::size_t best = 0;
  for (std::size_t i = 1; i < modes.size(); ++i) {
    if (modes[i].probability > modes[best].probability) best = i;
  }
  return modes[best];
}

const ManeuverPrediction& SvPrediction::mode(Maneuver m) const {
  for (const auto& p : modes) {
    if (p.maneuver == m) return p;
  }
  throw std::out_of_range("SV " + id + " has no maneuver " + std::string(to_string(m)));
}

const SvPrediction& PredictionSet::sv(const std::string& id) const {
  for (const auto& p : svs) {
    if (p.id == id) return p;
  }
  throw std::out_of_range("no prediction for SV " + id);
}

Predictor::Predictor(PredictorSettings settings, const GainLibrary& gains, LaneGeometry geometry)
    : settings_(std::move(settings)), gains_(&gains), geometry_(geometry) {}

PredictionSet Predictor::predict(const std::vector<SvObservation>& svs) {
  const auto order = build_priority_list(svs, geometry_, settings_.horizon, settings_.T);
  const int N = settings_.horizon;
  const double T = settings_.T;
  const ReferenceSettings ref_cfg{N, T, settings_.tau_h, settings_.shape};
  Vec6 q_std;
  for (int i = 0; i < 6; ++i) q_std(i) = settings_.noise.process_std[i];
  const Vec3m r_std(settings_.noise.measurement_std[0], settings_.noise.measurement_std[1],
                    settings_.noise.measurement_std[2]);

  PredictionSet out;
  std::vector<OccupantTrack> higher;
  std::map<std::string, Bank> next_banks;
  for (std::size_t idx : order) {
    const SvObservation& obs = svs[idx];
    const SvState& s = obs.state;
    SvPrediction pred;
    pred.id = obs.id;
    pred.state = s;
    pred.lane = lane_index_clamped(s.y, geometry_.lane_width);
    const auto modes = admissible_maneuvers(pred.lane);

    auto it = banks_.find(obs.id);
    const bool fresh = it == banks_.end() || it->second.lane != pred.lane;
    Bank bank;
    bank.lane = pred.lane;

    std::vector<double> log_lik;
    std::vector<double> costs;
    for (std::size_t j = 0; j < modes.size(); ++j) {
      const Maneuver m = modes[j];
      const GainSet& g = gains_->at(m);
      const auto refs = infer_references(s, m, g.mean_lon, g.mean_lat, higher, geometry_, ref_cfg);
      const auto model = PrimitiveModel::make(T, g.mean_lon, g.mean_lat, refs.v_ref, refs.y_ref);
      const auto roll = nominal_rollout(s, model, N, settings_.weights);

      ManeuverPrediction mp;
      mp.maneuver = m;
      mp.v_ref = refs.v_ref;
      mp.y_ref = refs.y_ref;
      mp.reference_infeasible = refs.solution.infeasible;
      mp.cost = roll.cost;
      mp.x.reserve(N);
      mp.y.reserve(N);
      for (const auto& st : roll.states) {
        mp.x.push_back(st.x);
        mp.y.push_back(st.y);
      }

      if (fresh) {
        bank.filters.emplace_back(s, q_std, r_std);
        mp.log_likelihood = 0.0;
      } else {
        ModeFilter f = it->second.filters[j];
        mp.log_likelihood = f.step(it->second.last_models[j], Vec3m(s.x, s.vx, s.y));
        bank.filters.push_back(f);
      }
      bank.last_models.push_back(model);
      log_lik.push_back(mp.log_likelihood);
      costs.push_back(mp.cost);
      pred.modes.push_back(std::move(mp));
    }
    const auto p = mode_probabilities(log_lik, costs, settings_.varsigma);
    for (std::size_t j = 0; j < p.size(); ++j) pred.modes[j].probability = p[j];

    const auto& best = pred.most_probable();
    higher.push_back({s.x, best.x, best.y});
    next_banks[obs.id] = std::move(bank);
    out.svs.push_back(std::move(pred));
  }
  banks_ = std::move(next_banks);
  return out;
}

std::string predictions_to_json(const PredictionSet& set, int step) {
  using nlohmann::json;
  json svs = json::array();
  for (const auto& sv : set.svs) {
    json modes = json::array();
    for (const auto& m : sv.modes) {
      modes.push_back({{"maneuver", to_string(m.maneuver)},
                       {"probability", m.probability},
                       {"v_ref", m.v_ref},
                       {"y_ref", m.y_ref},
                       {"reference_infeasible", m.reference_infeasible},
                       {"cost", m.cost},
                       {"log_likelihood", m.log_likelihood},
                       {"x", m.x},
                       {"y", m.y}});
    }
    svs.push_back({{"id", sv.id},
                   {"lane", sv.lane},
                   {"state", {sv.state.x, sv.state.vx, sv.state.ax, sv.state.y, sv.state.vy, sv.state.ay}},
                   {"modes", modes}});
  }
  return json{{"step", step}, {"svs", svs}}.dump();
}

}  // namespace isa
