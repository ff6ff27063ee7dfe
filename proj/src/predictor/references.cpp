#include "isa/predictor/references.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isa {

SpeedSolution project_speed(double anchor, const std::vector<SpeedConstraint>& constraints) {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool impossible = false;
  for (const auto& c : constraints) {
    if (c.coef > 0.0) {
      hi = std::min(hi, c.rhs / c.coef);
    } else if (c.coef < 0.0) {
      lo = std::max(lo, c.rhs / c.coef);
    } else if (c.rhs < 0.0) {
      impossible = true;
    }
  }
  SpeedSolution s;
  if (impossible || lo > hi) {
    s.speed = 0.0;
    s.infeasible = true;
    s.constrained = true;
    return s;
  }
  s.speed = std::clamp(anchor, lo, hi);
  s.constrained = s.speed != anchor;
  return s;
}

SvReferences infer_references(const SvState& state, Maneuver m, const Vec2& k_lon,
                              const Vec3& k_lat, const std::vector<OccupantTrack>& higher,
                              const LaneGeometry& geometry, const ReferenceSettings& cfg) {
  SvReferences out;
  const int lane = target_lane(m);
  out.y_ref = geometry.center(lane);
  const double nominal = geometry.nominal(lane);

  const auto base = rollout_positions(state, PrimitiveModel::make(cfg.T, k_lon, k_lat, 0.0, out.y_ref),
                                      cfg.horizon);
  const auto unit = rollout_positions(state, PrimitiveModel::make(cfg.T, k_lon, k_lat, 1.0, out.y_ref),
                                      cfg.horizon);
  std::vector<SpeedConstraint> constraints;
  for (const auto& h : higher) {
    if (!(h.x0 > state.x)) continue;
    const std::size_t steps = std::min<std::size_t>(cfg.horizon, std::min(h.x.size(), h.y.size()));
    for (std::size_t t = 0; t < steps; ++t) {
      if (std::abs(base.y[t] - h.y[t]) > cfg.shape.width) continue;
      const double beta = unit.x[t] - base.x[t];
      constraints.push_back({beta + cfg.tau_h, h.x[t] - cfg.shape.length - base.x[t]});
    }
  }
  out.solution = project_speed(nominal, constraints);
  out.v_ref = out.solution.speed;
  return out;
}

}  // namespace isa
