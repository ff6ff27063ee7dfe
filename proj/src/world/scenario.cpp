#include "isa/world/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace isa {

using nlohmann::json;

std::string_view to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::Isa: return "isa";
    case PlannerKind::Scmpc: return "scmpc";
    case PlannerKind::Deterministic: return "deterministic";
  }
  return "?";
}

PlannerKind planner_kind_from_string(std::string_view name) {
  if (name == "isa") return PlannerKind::Isa;
  if (name == "scmpc") return PlannerKind::Scmpc;
  if (name == "deterministic") return PlannerKind::Deterministic;
  throw std::invalid_argument("unknown planner '" + std::string(name) + "'");
}

std::string_view to_string(VehicleRole role) {
  switch (role) {
    case VehicleRole::Ego: return "ego";
    case VehicleRole::ScriptedSv: return "scripted";
    case VehicleRole::ClosedLoopSv: return "closed_loop";
  }
  return "?";
}

namespace {

VehicleRole role_from_string(std::string_view s) {
  if (s == "ego") return VehicleRole::Ego;
  if (s == "scripted") return VehicleRole::ScriptedSv;
  if (s == "closed_loop") return VehicleRole::ClosedLoopSv;
  throw std::invalid_argument("unknown role '" + std::string(s) + "'");
}

// Reads one JSON object, remembering its pointer path for error messages and
// rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string origin, std::string path)
      : j_(j), origin_(std::move(origin)), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }
  void mark(const std::string& key) { seen_.insert(key); }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      fail_at(key, e.what());
    }
  }

  template <typename T>
  T require(const char* key) {
    if (!j_.contains(key)) fail(std::string("missing required key '") + key + "'");
    T out{};
    get(key, out);
    return out;
  }

  // Speed given either in m/s under `key` or in km/h under `key`_kmh.
  template <typename T>
  void get_speed(const std::string& key, T& out) {
    const std::string kmh = key + "_kmh";
    if (j_.contains(key) && j_.contains(kmh)) fail("both '" + key + "' and '" + kmh + "' given");
    if (j_.contains(kmh)) {
      T v{};
      get(kmh.c_str(), v);
      out = scale(v);
    } else {
      get(key.c_str(), out);
    }
    seen_.insert(key);
    seen_.insert(kmh);
  }

  Reader child(const char* key) {
    seen_.insert(key);
    return Reader(j_.at(key), origin_, path_ + "/" + key);
  }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail("unknown key '" + it.key() + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(origin_ + ":" + (path_.empty() ? "/" : path_), what);
  }
  [[noreturn]] void fail_at(const char* key, const std::string& what) const {
    throw ParseError(origin_ + ":" + path_ + "/" + key, what);
  }

  const std::string& origin() const { return origin_; }
  const std::string& path() const { return path_; }

 private:
  static double scale(double kmh) { return kmh_to_ms(kmh); }
  static std::array<double, 3> scale(const std::array<double, 3>& kmh) {
    return {kmh_to_ms(kmh[0]), kmh_to_ms(kmh[1]), kmh_to_ms(kmh[2])};
  }

  const json& j_;
  std::string origin_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_planner(Reader r, PlannerParams& p) {
  std::string kind(to_string(p.kind));
  r.get("kind", kind);
  try {
    p.kind = planner_kind_from_string(kind);
  } catch (const std::exception& e) {
    r.fail_at("kind", e.what());
  }
  r.get("epsilon", p.epsilon);
  r.get("k_sc", p.k_sc);
  r.get("k_sam", p.k_sam);
  r.get("tau_h_target", p.tau_h_target);
  r.get("tau_h_ocp", p.tau_h_ocp);
  r.get("w_x", p.w_x);
  r.get("w_y", p.w_y);
  r.get("w_v", p.w_v);
  r.get("w_l", p.w_l);
  r.get("varsigma", p.varsigma);
  r.get("q1", p.q1);
  r.get("q2", p.q2);
  r.get("q3", p.q3);
  r.get("q4", p.q4);
  r.get("q5", p.q5);
  r.get("q6", p.q6);
  r.get("delta_max", p.delta_max);
  r.get("accel_min", p.accel_min);
  r.get("accel_max", p.accel_max);
  r.get("speed_min", p.speed_min);
  r.get("max_iterations", p.max_iterations);
  r.get("zeta_ev", p.zeta_ev);
  r.get("lambda_phi", p.lambda_phi);
  r.get("lambda_y", p.lambda_y);
  r.get("k_lon_ev", p.k_lon_ev);
  r.get("k_lat_ev", p.k_lat_ev);
  r.get("grid_dx", p.grid_dx);
  r.get("grid_dy", p.grid_dy);
  r.get("sigma_floor", p.sigma_floor);
  r.finish();
}

json write_planner(const PlannerParams& p) {
  return json{{"kind", to_string(p.kind)},
              {"epsilon", p.epsilon},
              {"k_sc", p.k_sc},
              {"k_sam", p.k_sam},
              {"tau_h_target", p.tau_h_target},
              {"tau_h_ocp", p.tau_h_ocp},
              {"w_x", p.w_x},
              {"w_y", p.w_y},
              {"w_v", p.w_v},
              {"w_l", p.w_l},
              {"varsigma", p.varsigma},
              {"q1", p.q1},
              {"q2", p.q2},
              {"q3", p.q3},
              {"q4", p.q4},
              {"q5", p.q5},
              {"q6", p.q6},
              {"delta_max", p.delta_max},
              {"accel_min", p.accel_min},
              {"accel_max", p.accel_max},
              {"speed_min", p.speed_min},
              {"max_iterations", p.max_iterations},
              {"zeta_ev", p.zeta_ev},
              {"lambda_phi", p.lambda_phi},
              {"lambda_y", p.lambda_y},
              {"k_lon_ev", p.k_lon_ev},
              {"k_lat_ev", p.k_lat_ev},
              {"grid_dx", p.grid_dx},
              {"grid_dy", p.grid_dy},
              {"sigma_floor", p.sigma_floor}};
}

ScriptEvent read_event(Reader r) {
  ScriptEvent e;
  e.vehicle = r.require<std::string>("vehicle");
  const auto kind = r.require<std::string>("kind");
  if (kind == "acceleration") {
    e.kind = EventKind::Acceleration;
  } else if (kind == "lane_change") {
    e.kind = EventKind::LaneChange;
  } else {
    r.fail_at("kind", "expected 'acceleration' or 'lane_change'");
  }
  std::string trigger = "step";
  r.get("trigger", trigger);
  if (trigger == "step") {
    e.trigger = TriggerKind::AtStep;
  } else if (trigger == "headway") {
    e.trigger = TriggerKind::Headway;
  } else {
    r.fail_at("trigger", "expected 'step' or 'headway'");
  }
  r.get("step", e.step);
  r.get("headway", e.headway);
  r.get("acceleration", e.acceleration);
  r.get("duration_steps", e.duration_steps);
  r.get("target_lane", e.target_lane);
  if (r.has("target_speed") || r.has("target_speed_kmh")) {
    double v = 0.0;
    r.get_speed("target_speed", v);
    e.target_speed = v;
  }
  r.mark("target_speed");
  r.mark("target_speed_kmh");
  r.finish();
  return e;
}

json write_event(const ScriptEvent& e) {
  json j{{"vehicle", e.vehicle},
         {"kind", e.kind == EventKind::Acceleration ? "acceleration" : "lane_change"},
         {"trigger", e.trigger == TriggerKind::AtStep ? "step" : "headway"},
         {"step", e.step},
         {"headway", e.headway},
         {"acceleration", e.acceleration},
         {"duration_steps", e.duration_steps},
         {"target_lane", e.target_lane}};
  if (e.target_speed) j["target_speed"] = *e.target_speed;
  return j;
}

ScenarioConfig from_json(const json& root, const std::string& origin) {
  ScenarioConfig c;
  Reader r(root, origin, "");
  r.get("name", c.name);
  if (r.has("road")) {
    Reader road = r.child("road");
    road.get("lane_width", c.road.lane_width);
    road.get_speed("nominal_speeds", c.road.nominal_speed);
    road.finish();
  }
  if (r.has("vehicle")) {
    Reader v = r.child("vehicle");
    v.get("length", c.shape.length);
    v.get("width", c.shape.width);
    v.get("lf", c.lf);
    v.get("lr", c.lr);
    v.finish();
  }
  r.get("horizon", c.horizon);
  r.get("dt", c.dt);
  r.get("steps", c.steps);
  r.get("seed", c.seed);
  r.get("med_vehicle", c.med_vehicle);

  if (!r.has("vehicles")) r.fail("missing required key 'vehicles'");
  const json& vehicles = r.raw("vehicles");
  if (!vehicles.is_array()) r.fail_at("vehicles", "expected an array");
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    Reader v(vehicles[i], origin, "/vehicles/" + std::to_string(i));
    VehicleSpec s;
    s.id = v.require<std::string>("id");
    std::string role = "closed_loop";
    v.get("role", role);
    try {
      s.role = role_from_string(role);
    } catch (const std::exception& e) {
      v.fail_at("role", e.what());
    }
    s.x = v.require<double>("x");
    if (v.has("lane") && v.has("y")) v.fail("give either 'lane' or 'y', not both");
    if (v.has("lane")) {
      int lane = 0;
      v.get("lane", lane);
      if (lane < 1 || lane > LaneGeometry::kLaneCount) v.fail_at("lane", "lane must be 1..3");
      s.y = c.road.center(lane);
    } else {
      s.y = v.require<double>("y");
    }
    v.mark("lane");
    if (!v.has("vx") && !v.has("vx_kmh")) v.fail("missing required key 'vx' or 'vx_kmh'");
    v.get_speed("vx", s.vx);
    v.get("resample_gains", s.resample_gains);
    v.finish();
    c.vehicles.push_back(std::move(s));
  }

  if (r.has("events")) {
    const json& events = r.raw("events");
    if (!events.is_array()) r.fail_at("events", "expected an array");
    for (std::size_t i = 0; i < events.size(); ++i) {
      c.events.push_back(read_event(Reader(events[i], origin, "/events/" + std::to_string(i))));
    }
  }
  if (r.has("planner")) read_planner(r.child("planner"), c.planner);
  if (r.has("predictor")) {
    Reader p = r.child("predictor");
    p.get("process_std", c.predictor.process_std);
    p.get("measurement_std", c.predictor.measurement_std);
    p.finish();
  }
  if (r.has("gains")) {
    Reader g = r.child("gains");
    g.get("seed", c.gains.seed);
    g.get("trajectories_per_maneuver", c.gains.trajectories_per_maneuver);
    g.get("cache_path", c.gains.cache_path);
    g.get("cluster_dir", c.gains.cluster_dir);
    g.finish();
  }
  r.finish();
  return c;
}

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

void ScenarioConfig::validate() const {
  road.validate();
  if (!(shape.length > 0.0) || !(shape.width > 0.0)) {
    throw ValidationError("vehicle length and width must be > 0");
  }
  if (!(lf > 0.0) || !(lr > 0.0)) throw ValidationError("lf and lr must be > 0");
  if (horizon < 1) throw ValidationError("horizon N must be >= 1");
  if (!(dt > 0.0)) throw ValidationError("sampling interval T must be > 0");
  if (steps < 1) throw ValidationError("steps must be >= 1");
  if (!(planner.epsilon > 0.0 && planner.epsilon <= 1.0)) {
    throw ValidationError("epsilon must lie in (0, 1]");
  }
  if (planner.k_sam < 2) throw ValidationError("k_sam must be >= 2");
  if (planner.k_sc < 1) throw ValidationError("k_sc must be >= 1");
  if (planner.max_iterations < 1) throw ValidationError("max_iterations must be >= 1");
  if (!(planner.grid_dx > 0.0 && planner.grid_dy > 0.0)) {
    throw ValidationError("grid cell sizes must be > 0");
  }
  if (!(planner.accel_min < planner.accel_max)) throw ValidationError("accel_min must be < accel_max");
  if (!(planner.delta_max > 0.0)) throw ValidationError("delta_max must be > 0");
  if (!(planner.varsigma > 0.0)) throw ValidationError("varsigma must be > 0");
  for (double s : predictor.process_std) {
    if (!(s > 0.0)) throw ValidationError("process_std entries must be > 0");
  }
  for (double s : predictor.measurement_std) {
    if (!(s > 0.0)) throw ValidationError("measurement_std entries must be > 0");
  }
  if (gains.trajectories_per_maneuver < 2) {
    throw ValidationError("gains.trajectories_per_maneuver must be >= 2");
  }

  int egos = 0;
  std::set<std::string> ids;
  for (const auto& v : vehicles) {
    if (v.id.empty()) throw ValidationError("vehicle id must not be empty");
    if (!ids.insert(v.id).second) throw ValidationError("duplicate vehicle id '" + v.id + "'");
    if (v.role == VehicleRole::Ego) ++egos;
    if (!finite_all({v.x, v.y, v.vx})) throw ValidationError("vehicle '" + v.id + "' has non-finite state");
    if (v.vx < 0.0) throw ValidationError("vehicle '" + v.id + "' has negative speed");
    if (v.y < 0.0 || v.y > road.road_width()) {
      throw ValidationError("vehicle '" + v.id + "' is off the road");
    }
  }
  if (egos != 1) {
    throw ValidationError("exactly one EV required, found " + std::to_string(egos));
  }
  for (const auto& e : events) {
    if (!ids.count(e.vehicle)) throw ValidationError("event refers to unknown vehicle '" + e.vehicle + "'");
    if (e.vehicle == ego().id) throw ValidationError("events cannot target the EV");
    if (e.step < 0) throw ValidationError("event step must be >= 0");
    if (e.kind == EventKind::LaneChange &&
        (e.target_lane < 1 || e.target_lane > LaneGeometry::kLaneCount)) {
      throw ValidationError("lane_change event needs target_lane in 1..3");
    }
    if (e.trigger == TriggerKind::Headway && !(e.headway > 0.0)) {
      throw ValidationError("headway trigger threshold must be > 0");
    }
    if (e.target_speed && !(*e.target_speed >= 0.0)) {
      throw ValidationError("target_speed must be >= 0");
    }
  }
  if (!med_vehicle.empty() && (!ids.count(med_vehicle) || med_vehicle == ego().id)) {
    throw ValidationError("med_vehicle must name an SV");
  }
}

const VehicleSpec& ScenarioConfig::ego() const {
  for (const auto& v : vehicles) {
    if (v.role == VehicleRole::Ego) return v;
  }
  throw ValidationError("scenario has no EV");
}

std::vector<const VehicleSpec*> ScenarioConfig::surrounding() const {
  std::vector<const VehicleSpec*> out;
  for (const auto& v : vehicles) {
    if (v.role != VehicleRole::Ego) out.push_back(&v);
  }
  return out;
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ":byte " + std::to_string(e.byte), e.what());
  }
  ScenarioConfig c = from_json(root, origin);
  c.validate();
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.string());
}

std::string serialize_scenario(const ScenarioConfig& c) {
  json vehicles = json::array();
  for (const auto& v : c.vehicles) {
    vehicles.push_back({{"id", v.id},
                        {"role", to_string(v.role)},
                        {"x", v.x},
                        {"y", v.y},
                        {"vx", v.vx},
                        {"resample_gains", v.resample_gains}});
  }
  json events = json::array();
  for (const auto& e : c.events) events.push_back(write_event(e));
  json root{{"name", c.name},
            {"road", {{"lane_width", c.road.lane_width}, {"nominal_speeds", c.road.nominal_speed}}},
            {"vehicle",
             {{"length", c.shape.length}, {"width", c.shape.width}, {"lf", c.lf}, {"lr", c.lr}}},
            {"horizon", c.horizon},
            {"dt", c.dt},
            {"steps", c.steps},
            {"seed", c.seed},
            {"med_vehicle", c.med_vehicle},
            {"vehicles", vehicles},
            {"events", events},
            {"planner", write_planner(c.planner)},
            {"predictor",
             {{"process_std", c.predictor.process_std},
              {"measurement_std", c.predictor.measurement_std}}},
            {"gains",
             {{"seed", c.gains.seed},
              {"trajectories_per_maneuver", c.gains.trajectories_per_maneuver},
              {"cache_path", c.gains.cache_path},
              {"cluster_dir", c.gains.cluster_dir}}}};
  return root.dump(2) + "\n";
}

}  // namespace isa
