#include "isa/sim/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace isa {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace) {
  std::ostringstream os;
  os << "step,time_s,vehicle,x_m,y_m,vx_mps,vy_mps,ax_mps2,ay_mps2,yaw_rad,steer_rad,maneuver\n";
  const EgoParams ep;
  for (const auto& s : trace.steps) {
    const SvState e = ego_as_sv_state(s.ego, ep);
    os << s.step << ',' << format_number(s.time) << ",EV," << format_number(e.x) << ','
       << format_number(e.y) << ',' << format_number(e.vx) << ',' << format_number(e.vy) << ','
       << format_number(e.ax) << ',' << format_number(e.ay) << ','
       << format_number(s.ego(ego::PHI)) << ',' << format_number(s.ego(ego::DELTA)) << ','
       << to_string(s.plan.maneuver) << '\n';
    for (std::size_t i = 0; i < s.svs.size(); ++i) {
      const auto& v = s.svs[i];
      os << s.step << ',' << format_number(s.time) << ',' << trace.sv_ids[i] << ','
         << format_number(v.x) << ',' << format_number(v.y) << ',' << format_number(v.vx) << ','
         << format_number(v.vy) << ',' << format_number(v.ax) << ',' << format_number(v.ay)
         << ",0,0," << to_string(s.maneuvers[i]) << '\n';
    }
  }
  write_text(path, os.str());
}

void write_diagnostics_csv(const std::filesystem::path& path, const SimTrace& trace) {
  std::ostringstream os;
  os << "step,maneuver,v_ref_mps,y_ref_m,J_VT1,J_VT2,J_VT3,p_VT1,p_VT2,p_VT3,v_VT1,v_VT2,v_VT3,bind_VT1,bind_VT2,bind_VT3,binding_sv,status,"
        "iterations,max_rho,snap,steer_accel,dv_min_m,dv_track\n";
  for (const auto& s : trace.steps) {
    const auto& d = s.plan;
    double dv_min = INFINITY;
    std::string track;
    for (std::size_t t = 0; t < d.dv.size(); ++t) {
      dv_min = std::min(dv_min, d.dv[t]);
      if (t) track += ';';
      track += format_number(d.dv[t]);
    }
    os << s.step << ',' << to_string(d.maneuver) << ',' << format_number(d.v_ref) << ','
       << format_number(d.y_ref);
    for (double j : d.costs) os << ',' << format_number(j);
    for (double p : d.probabilities) os << ',' << format_number(p);
    for (double v : d.option_v_ref) os << ',' << format_number(v);
    for (const auto& b : d.option_binding) os << ',' << b;
    os << ',' << d.binding_sv << ',' << to_string(d.status) << ',' << d.iterations << ','
       << format_number(d.max_rho) << ',' << format_number(d.input(0)) << ','
       << format_number(d.input(1)) << ',' << format_number(dv_min) << ',' << track << '\n';
  }
  write_text(path, os.str());
}

void write_rect_csv(const std::filesystem::path& path, const std::vector<SvOccupancy>& rects,
                    int step) {
  std::ostringstream os;
  os << "step,sv,t,ox_m,oy_m,length_m,width_m\n";
  for (const auto& occ : rects) {
    for (std::size_t t = 0; t < occ.rects.size(); ++t) {
      const auto& r = occ.rects[t];
      os << step << ',' << occ.sv << ',' << t + 1 << ',' << format_number(r.ox) << ','
         << format_number(r.oy) << ',' << format_number(r.length) << ',' << format_number(r.width)
         << '\n';
    }
  }
  write_text(path, os.str());
}

std::string med_json(const MonteCarloResult& r) {
  nlohmann::ordered_json j;
  j["sv"] = r.sv;
  j["replicas"] = r.baseline_d_min.size();
  j["baseline"] = {{"label", r.baseline}, {"d_min", r.baseline_d_min}};
  j["planners"] = nlohmann::ordered_json::array();
  for (const auto& s : r.stats) {
    j["planners"].push_back({{"label", s.label},
                             {"mean_difference", s.mean},
                             {"std_difference", s.std},
                             {"min_difference", s.min},
                             {"max_difference", s.max},
                             {"collisions", s.collisions},
                             {"d_min", s.d_min},
                             {"difference", s.difference}});
  }
  return j.dump(2) + "\n";
}

namespace {
StageTiming stage(const std::vector<double>& v) {
  StageTiming s;
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) {
    sum += x;
    s.max = std::max(s.max, x);
  }
  s.mean = sum / double(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / double(v.size() - 1)) : 0.0;
  return s;
}
}  // namespace

TimingReport timing_report(const SimTrace& trace, double budget) {
  std::vector<double> plan, ocp;
  TimingReport r;
  r.budget = budget;
  for (const auto& s : trace.steps) {
    plan.push_back(s.plan.planning_time);
    ocp.push_back(s.plan.ocp_time);
    if (s.plan.planning_time > budget) ++r.over_budget;
  }
  r.planning = stage(plan);
  r.ocp = stage(ocp);
  r.steps = int(trace.steps.size());
  return r;
}

std::string timing_json(const TimingReport& r) {
  nlohmann::ordered_json j;
  j["steps"] = r.steps;
  j["budget_s"] = r.budget;
  j["planning_time_s"] = {{"mean", r.planning.mean}, {"std", r.planning.std}, {"max", r.planning.max}};
  j["ocp_time_s"] = {{"mean", r.ocp.mean}, {"std", r.ocp.std}, {"max", r.ocp.max}};
  j["steps_over_budget"] = r.over_budget;
  j["ocp_mean_within_budget"] = r.ocp.mean <= r.budget;
  return j.dump(2) + "\n";
}

}  // namespace isa
