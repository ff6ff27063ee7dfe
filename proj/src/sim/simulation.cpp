#include "isa/sim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <stdexcept>

#include "isa/predictor/priority.hpp"
#include "isa/predictor/references.hpp"

namespace isa {

GainLibrary load_gains(const GainSource& src, const LaneGeometry& geometry, double T) {
  namespace fs = std::filesystem;
  const GainCacheMeta want{T, src.seed, src.trajectories_per_maneuver,
                           src.cluster_dir.empty() ? "synthetic" : src.cluster_dir};
  if (!src.cache_path.empty() && fs::exists(src.cache_path)) {
    auto [lib, meta] = load_gain_cache(src.cache_path);
    if (meta == want) return lib;
  }
  GainLibrary lib;
  if (!src.cluster_dir.empty()) {
    std::vector<TrajectoryCluster> clusters;
    for (Maneuver m : kSvManeuvers) {
      const fs::path file = fs::path(src.cluster_dir) / (std::string(to_string(m)) + ".csv");
      clusters.push_back(normalize_cluster(m, read_cluster_csv(file), T));
    }
    IdentificationOptions opts;
    opts.T = T;
    lib = build_gain_sets(clusters, opts);
  } else {
    lib = identify_synthetic(src.seed, geometry, T, src.trajectories_per_maneuver);
  }
  if (!src.cache_path.empty()) save_gain_cache(src.cache_path, lib, want);
  return lib;
}

std::size_t SimTrace::sv_index(const std::string& id) const {
  const auto it = std::find(sv_ids.begin(), sv_ids.end(), id);
  if (it == sv_ids.end()) throw std::out_of_range("trace has no SV " + id);
  return std::size_t(it - sv_ids.begin());
}

bool footprints_overlap(double x1, double y1, double x2, double y2, const VehicleShape& shape) {
  return std::abs(x1 - x2) < shape.length && std::abs(y1 - y2) < shape.width;
}

double med(const SimTrace& trace, const std::string& sv) {
  const std::size_t i = trace.sv_index(sv);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : trace.steps) {
    const double dx = s.ego(ego::X) - s.svs[i].x;
    const double dy = s.ego(ego::Y) - s.svs[i].y;
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

namespace {

// Mutable state of one SV during a run.
struct SvRun {
  const VehicleSpec* spec = nullptr;
  SvState s;
  Maneuver m = Maneuver::M0;
  double hold_speed = 0.0;
  std::optional<double> speed_override;
  bool accelerating = false;
  double accel = 0.0;
  int accel_left = 0;  // remaining steps, negative: unbounded
};

Rng make_stream(std::uint64_t seed, int replica, int purpose) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(replica),
                    std::uint32_t(purpose)};
  return Rng(seq);
}

// Time headway to the nearest SV ahead in the same lane; +inf without one.
double headway_to_leader(const std::vector<SvRun>& svs, std::size_t i, const ScenarioConfig& c) {
  const auto& me = svs[i].s;
  const int lane = lane_index_clamped(me.y, c.road.lane_width);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < svs.size(); ++j) {
    if (j == i) continue;
    const auto& o = svs[j].s;
    if (lane_index_clamped(o.y, c.road.lane_width) != lane || o.x <= me.x) continue;
    gap = std::min(gap, o.x - me.x - c.shape.length);
  }
  if (!std::isfinite(gap)) return gap;
  return me.vx > 0.0 ? gap / me.vx : std::numeric_limits<double>::infinity();
}

void apply_events(const ScenarioConfig& c, int k, std::vector<SvRun>& svs,
                  std::vector<bool>& fired, std::vector<std::string>& log) {
  for (std::size_t e = 0; e < c.events.size(); ++e) {
    if (fired[e]) continue;
    const auto& ev = c.events[e];
    const auto it = std::find_if(svs.begin(), svs.end(),
                                 [&](const SvRun& r) { return r.spec->id == ev.vehicle; });
    if (it == svs.end()) continue;
    const std::size_t i = std::size_t(it - svs.begin());
    const bool due = ev.trigger == TriggerKind::AtStep ? k >= ev.step
                                                       : headway_to_leader(svs, i, c) < ev.headway;
    if (!due) continue;
    fired[e] = true;
    SvRun& r = svs[i];
    if (ev.kind == EventKind::Acceleration) {
      r.accelerating = true;
      r.accel = ev.acceleration;
      r.accel_left = ev.duration_steps;
      log.push_back(ev.vehicle + ":acceleration");
    } else {
      const int lane = lane_index_clamped(r.s.y, c.road.lane_width);
      r.m = sv_maneuver_between(lane, ev.target_lane);
      if (ev.target_speed) r.speed_override = *ev.target_speed;
      log.push_back(ev.vehicle + ":lane_change");
    }
  }
}

void advance_svs(const ScenarioConfig& c, const GainLibrary& gains, std::vector<SvRun>& svs,
                 Rng& traffic) {
  const double T = c.dt;
  std::vector<SvObservation> obs;
  for (const auto& r : svs) obs.push_back({r.spec->id, r.s});
  const auto order = build_priority_list(obs, c.road, c.horizon, T);
  const ReferenceSettings ref_cfg{c.horizon, T, c.planner.tau_h_target, c.shape};

  // Gains are drawn in declaration order so the stream does not depend on
  // the priority order.
  std::vector<std::pair<Vec2, Vec3>> k(svs.size());
  for (std::size_t i = 0; i < svs.size(); ++i) {
    const GainSet& set = gains.at(svs[i].m);
    if (svs[i].spec->resample_gains) {
      std::uniform_int_distribution<std::size_t> lon(0, set.lon_gains.size() - 1);
      std::uniform_int_distribution<std::size_t> lat(0, set.lat_gains.size() - 1);
      const std::size_t a = lon(traffic);
      const std::size_t b = lat(traffic);
      k[i] = {set.lon_gains[a], set.lat_gains[b]};
    } else {
      k[i] = {set.mean_lon, set.mean_lat};
    }
  }

  std::vector<OccupantTrack> higher;
  std::vector<SvState> next(svs.size());
  for (std::size_t i : order) {
    SvRun& r = svs[i];
    const double y_ref = c.road.center(target_lane(r.m));
    double v_ref = r.hold_speed;
    if (r.speed_override) {
      v_ref = *r.speed_override;
    } else if (r.spec->role == VehicleRole::ClosedLoopSv) {
      const GainSet& set = gains.at(r.m);
      v_ref = infer_references(r.s, r.m, set.mean_lon, set.mean_lat, higher, c.road, ref_cfg).v_ref;
    }
    const auto model = PrimitiveModel::make(T, k[i].first, k[i].second, v_ref, y_ref);
    const auto roll = rollout_positions(r.s, model, c.horizon);
    higher.push_back({r.s.x, roll.x, roll.y});

    SvState s = step_primitive(r.s, model);
    if (r.accelerating) {
      const double a = r.accel;
      double dt = T;
      if (a < 0.0 && r.s.vx + a * T < 0.0) dt = -r.s.vx / a;
      s.x = r.s.x + r.s.vx * dt + 0.5 * a * dt * dt;
      s.vx = std::max(0.0, r.s.vx + a * dt);
      s.ax = s.vx > 0.0 ? a : 0.0;
      if (r.accel_left > 0 && --r.accel_left == 0) r.accelerating = false;
      r.hold_speed = s.vx;
    }
    next[i] = s;
  }
  for (std::size_t i = 0; i < svs.size(); ++i) {
    SvRun& r = svs[i];
    r.s = next[i];
    if (!is_lane_keep(r.m)) {
      const int lane = target_lane(r.m);
      if (std::abs(r.s.y - c.road.center(lane)) < 0.05 && std::abs(r.s.vy) < 0.05) {
        r.m = sv_maneuver_between(lane, lane);
      }
    }
  }
}

}  // namespace

SimTrace run_closed_loop(const ScenarioConfig& c, const GainLibrary& gains, const SimOptions& opt,
                         StepCapture* capture) {
  c.validate();
  SimTrace trace;
  trace.scenario = c.name;
  trace.planner = std::string(to_string(c.planner.kind));

  Vec8 ego = Vec8::Zero();
  ego(ego::X) = c.ego().x;
  ego(ego::Y) = c.ego().y;
  ego(ego::V) = c.ego().vx;

  std::vector<SvRun> svs;
  for (const VehicleSpec* v : c.surrounding()) {
    SvRun r;
    r.spec = v;
    r.s.x = v->x;
    r.s.y = v->y;
    r.s.vx = v->vx;
    const int lane = lane_of(v->y, c.road);
    r.m = sv_maneuver_between(lane, lane);
    r.hold_speed = v->vx;
    svs.push_back(r);
    trace.sv_ids.push_back(v->id);
  }

  Rng traffic = make_stream(c.seed, opt.replica, 1);
  Rng planner_rng = make_stream(c.seed, opt.replica, 2);
  EgoPlanner planner(planning_context(c), predictor_settings(c), gains);
  std::vector<bool> fired(c.events.size(), false);

  for (int k = 0; k < c.steps; ++k) {
    SimStep rec;
    rec.step = k;
    rec.time = k * c.dt;
    apply_events(c, k, svs, fired, rec.events);
    rec.ego = ego;
    for (const auto& r : svs) {
      rec.svs.push_back(r.s);
      rec.maneuvers.push_back(r.m);
      if (!trace.collision &&
          footprints_overlap(ego(ego::X), ego(ego::Y), r.s.x, r.s.y, c.shape)) {
        trace.collision = true;
        trace.collision_step = k;
      }
    }

    std::vector<SvObservation> obs;
    for (const auto& r : svs) obs.push_back({r.spec->id, r.s});
    auto step = planner.plan(ego, obs, planner_rng);
    const auto& out = step.output;
    auto& d = rec.plan;
    d.maneuver = out.target.maneuver;
    d.v_ref = out.target.v_ref;
    d.y_ref = out.target.y_ref;
    for (std::size_t i = 0; i < 3; ++i) {
      d.costs[i] = out.target.options[i].cost;
      d.probabilities[i] = out.target.options[i].probability;
      d.option_v_ref[i] = out.target.options[i].v_ref;
      d.option_binding[i] = out.target.options[i].binding_sv;
    }
    d.binding_sv = out.target.chosen().binding_sv;
    d.dv = out.dv.x;
    d.status = out.plan.status;
    d.iterations = out.plan.iterations;
    d.max_rho = out.plan.rho.empty() ? 0.0 : *std::max_element(out.plan.rho.begin(), out.plan.rho.end());
    d.input = out.plan.inputs.front();
    d.planning_time = step.planning_time;
    d.ocp_time = out.plan.wall_time;
    if (capture && k == opt.record_occupancy_step) {
      capture->step = k;
      capture->predictions = step.predictions;
      capture->output = out;
    }
    trace.steps.push_back(std::move(rec));

    advance_svs(c, gains, svs, traffic);
    ego = step_ego(ego, d.input, c.dt, {c.lf, c.lr});
  }
  return trace;
}

}  // namespace isa
