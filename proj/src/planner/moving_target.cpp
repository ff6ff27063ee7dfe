#include "isa/planner/moving_target.hpp"

#include <cmath>
#include <limits>

#include "isa/predictor/references.hpp"

namespace isa {

const EgoManeuverOption& MovingTarget::chosen() const {
  for (const auto& o : options) {
    if (o.maneuver == maneuver) return o;
  }
  return options.front();
}

std::vector<SvObstacle> obstacles_of(const std::vector<SvOccupancy>& occupancy,
                                     const PredictionSet& predictions) {
  std::vector<SvObstacle> out;
  out.reserve(occupancy.size());
  for (const auto& occ : occupancy) out.push_back({predictions.sv(occ.sv).state.x, &occ});
  return out;
}

std::array<double, 3> ego_maneuver_probabilities(const std::array<double, 3>& costs,
                                                 double varsigma) {
  std::array<double, 3> p{};
  double total = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    p[i] = 1.0 / std::sqrt(costs[i] + varsigma);
    total += p[i];
  }
  for (auto& v : p) v /= total;
  return p;
}

MovingTarget ego_maneuver_targets(const Vec8& ego, const EgoParams& ego_params,
                                  const std::vector<SvObstacle>& obstacles,
                                  const LaneGeometry& geometry, const MovingTargetSettings& cfg) {
  const SvState s = ego_as_sv_state(ego, ego_params);
  const int current = lane_index_clamped(s.y, geometry.lane_width);
  MovingTarget out;

  std::array<double, 3> costs{};
  for (std::size_t i = 0; i < 3; ++i) {
    auto& opt = out.options[i];
    opt.maneuver = kEvManeuvers[i];
    const int lane = int(i) + 1;
    opt.y_ref = geometry.center(lane);

    const auto base = rollout_positions(
        s, PrimitiveModel::make(cfg.T, cfg.k_lon, cfg.k_lat, 0.0, opt.y_ref), cfg.horizon);
    const auto unit = rollout_positions(
        s, PrimitiveModel::make(cfg.T, cfg.k_lon, cfg.k_lat, 1.0, opt.y_ref), cfg.horizon);

    std::vector<SpeedConstraint> constraints;
    std::vector<const std::string*> owners;
    for (const auto& ob : obstacles) {
      if (!(ob.x_now > s.x)) continue;
      const auto& rects = ob.occupancy->rects;
      const std::size_t steps = std::min<std::size_t>(cfg.horizon, rects.size());
      for (std::size_t t = 0; t < steps; ++t) {
        const auto& r = rects[t];
        if (std::abs(base.y[t] - r.oy) > 0.5 * (cfg.shape.width + r.width)) continue;
        const double beta = unit.x[t] - base.x[t];
        constraints.push_back(
            {beta + cfg.tau_h, r.ox - 0.5 * (r.length + cfg.shape.length) - base.x[t]});
        owners.push_back(&ob.occupancy->sv);
      }
    }
    const auto sol = project_speed(geometry.nominal(lane), constraints);
    opt.v_ref = sol.speed;
    opt.constrained = sol.constrained;
    opt.infeasible = sol.infeasible;
    if (sol.constrained && !sol.infeasible) {
      double tightest = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < constraints.size(); ++c) {
        if (constraints[c].coef <= 0.0) continue;
        const double bound = constraints[c].rhs / constraints[c].coef;
        if (bound < tightest) {
          tightest = bound;
          opt.binding_sv = *owners[c];
        }
      }
    }
    const auto roll = nominal_rollout(
        s, PrimitiveModel::make(cfg.T, cfg.k_lon, cfg.k_lat, opt.v_ref, opt.y_ref), cfg.horizon,
        cfg.weights);
    opt.cost = roll.cost;
    costs[i] = roll.cost;
  }

  const auto p = ego_maneuver_probabilities(costs, cfg.varsigma);
  for (std::size_t i = 0; i < 3; ++i) out.options[i].probability = p[i];

  out.all_infeasible = true;
  for (const auto& o : out.options) out.all_infeasible = out.all_infeasible && o.infeasible;

  std::size_t best = std::size_t(current - 1);
  if (out.all_infeasible) {
    out.options[best].v_ref = 0.0;
  } else {
    for (std::size_t i = 0; i < 3; ++i) {
      const int effort = std::abs(int(i) + 1 - current);
      const int best_effort = std::abs(int(best) + 1 - current);
      if (p[i] > p[best] || (p[i] == p[best] && effort < best_effort)) best = i;
    }
  }
  out.maneuver = out.options[best].maneuver;
  out.v_ref = out.options[best].v_ref;
  out.y_ref = out.options[best].y_ref;
  return out;
}

}  // namespace isa
