#include "isa/occupancy/occupancy.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace isa {

UncertaintySet quantify_all(const PredictionSet& predictions, const GainLibrary& gains, int k_sam,
                            int horizon, double T, Rng& rng) {
  UncertaintySet out;
  for (const auto& sv : predictions.svs) {
    auto& tracks = out[sv.id];
    for (const auto& m : sv.modes) {
      StdTrack tr =
          quantify_maneuver(sv.state, m.v_ref, m.y_ref, gains.at(m.maneuver), k_sam, horizon, T, rng);
      tr.sv = sv.id;
      tracks.push_back(std::move(tr));
    }
  }
  return out;
}

namespace {
[[noreturn]] void missing(const std::string& sv, Maneuver m, int t) {
  throw std::out_of_range("no uncertainty for (" + sv + ", " + std::string(to_string(m)) + ", t=" +
                          std::to_string(t) + ")");
}
}  // namespace

GmmSlice assemble_slice(const SvPrediction& sv, const std::vector<StdTrack>& tracks, int t,
                        double sigma_floor) {
  std::vector<GmmComponent> comps;
  double total = 0.0;
  for (const auto& m : sv.modes) total += m.probability;
  for (const auto& m : sv.modes) {
    const auto it = std::find_if(tracks.begin(), tracks.end(),
                                 [&](const StdTrack& tr) { return tr.maneuver == m.maneuver; });
    if (it == tracks.end() || t >= int(it->sigma_x.size()) || t >= int(it->sigma_y.size()) ||
        t >= int(m.x.size())) {
      missing(sv.id, m.maneuver, t);
    }
    comps.push_back({m.probability / total, m.x[t], m.y[t], it->sigma_x[t], it->sigma_y[t]});
  }
  return make_slice(std::move(comps), sigma_floor, sv.id, t);
}

std::vector<SvOccupancy> build_occupancy(const PredictionSet& predictions,
                                         const UncertaintySet& uncertainty,
                                         const OccupancySettings& settings) {
  std::vector<SvOccupancy> out;
  for (const auto& sv : predictions.svs) {
    const auto it = uncertainty.find(sv.id);
    if (it == uncertainty.end()) missing(sv.id, sv.modes.front().maneuver, 0);
    SvOccupancy occ;
    occ.sv = sv.id;
    const int steps = sv.modes.empty() ? 0 : int(sv.modes.front().x.size());
    for (int t = 0; t < steps; ++t) {
      const auto slice = assemble_slice(sv, it->second, t, settings.sigma_floor);
      occ.rects.push_back(dilate(level_rect(slice, settings.epsilon, settings.grid), settings.shape));
    }
    out.push_back(std::move(occ));
  }
  return out;
}

ScenarioSamples scmpc_occupancy(const PredictionSet& predictions, const GainLibrary& gains, int k_sc,
                                const VehicleShape& shape, int horizon, double T, Rng& rng) {
  if (k_sc < 1) throw std::invalid_argument("scmpc_occupancy: k_sc must be >= 1");
  const std::uint64_t base = rng();
  ScenarioSamples out;
  for (std::size_t i = 0; i < predictions.svs.size(); ++i) {
    const auto& sv = predictions.svs[i];
    std::seed_seq seq{base, std::uint64_t(i)};
    Rng sub(seq);
    std::vector<double> weights;
    for (const auto& m : sv.modes) weights.push_back(m.probability);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

    std::vector<Rollout> samples;
    for (int s = 0; s < k_sc; ++s) {
      const auto& mode = sv.modes[pick(sub)];
      auto r = sample_rollouts(sv.state, mode.v_ref, mode.y_ref, gains.at(mode.maneuver), 1, horizon,
                               T, sub);
      samples.push_back(std::move(r.front()));
    }
    SvOccupancy raw{sv.id, {}};
    SvOccupancy dil{sv.id, {}};
    for (int t = 0; t < horizon; ++t) {
      Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
      for (const auto& r : samples) {
        b.x_min = std::min(b.x_min, r.x[t]);
        b.x_max = std::max(b.x_max, r.x[t]);
        b.y_min = std::min(b.y_min, r.y[t]);
        b.y_max = std::max(b.y_max, r.y[t]);
      }
      const auto rect = OccupancyRect::from_box(b);
      raw.rects.push_back(rect);
      dil.rects.push_back(dilate(rect, shape));
    }
    out.raw.push_back(std::move(raw));
    out.dilated.push_back(std::move(dil));
    out.rollouts[sv.id] = std::move(samples);
  }
  return out;
}

std::vector<SvOccupancy> deterministic_occupancy(const PredictionSet& predictions,
                                                 const VehicleShape& shape) {
  std::vector<SvOccupancy> out;
  for (const auto& sv : predictions.svs) {
    const auto& best = sv.most_probable();
    SvOccupancy occ{sv.id, {}};
    for (std::size_t t = 0; t < best.x.size(); ++t) {
      occ.rects.push_back(dilate({best.x[t], best.y[t], 0.0, 0.0}, shape));
    }
    out.push_back(std::move(occ));
  }
  return out;
}

}  // namespace isa
