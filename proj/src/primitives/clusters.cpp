#include "isa/primitives/clusters.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "isa/primitives/identification.hpp"

namespace isa {

TrajectoryCluster normalize_cluster(Maneuver maneuver, std::vector<RawTrajectory> raw, double T) {
  if (raw.empty()) throw std::invalid_argument("normalize_cluster: empty cluster");
  std::size_t longest = 0;
  for (const auto& tr : raw) {
    if (tr.y.empty() || tr.y.size() != tr.vx.size()) {
      throw std::invalid_argument("normalize_cluster: trajectory channels must be nonempty and equal length");
    }
    longest = std::max(longest, tr.size());
  }
  for (auto& tr : raw) {
    tr.y.resize(longest, tr.y.back());
    tr.vx.resize(longest, tr.vx.back());
  }
  TrajectoryCluster cluster;
  cluster.maneuver = maneuver;
  cluster.T = T;
  cluster.trajectories = std::move(raw);
  return cluster;
}

std::vector<double> lateral_step_std(const TrajectoryCluster& cluster) {
  const int steps = cluster.steps();
  const auto n = cluster.trajectories.size();
  std::vector<double> out(steps, 0.0);
  if (n < 2) return out;
  for (int j = 0; j < steps; ++j) {
    double mean = 0.0;
    for (const auto& tr : cluster.trajectories) mean += tr.y[j];
    mean /= double(n);
    double ss = 0.0;
    for (const auto& tr : cluster.trajectories) ss += (tr.y[j] - mean) * (tr.y[j] - mean);
    out[j] = std::sqrt(ss / double(n - 1));
  }
  return out;
}

namespace {

double clipped_normal(std::mt19937_64& rng, double mean, double std, double limit) {
  std::normal_distribution<double> d(mean, std);
  return std::clamp(d(rng), mean - limit, mean + limit);
}

double log_uniform(std::mt19937_64& rng, double nominal, double spread) {
  std::uniform_real_distribution<double> u(-std::log(spread), std::log(spread));
  return nominal * std::exp(u(rng));
}

}  // namespace

std::vector<SyntheticCluster> synthesize_clusters(std::uint64_t seed, const LaneGeometry& geometry,
                                                  const SynthesisOptions& opt) {
  if (opt.trajectories < 1) throw std::invalid_argument("synthesize_clusters: need >= 1 trajectory");
  std::vector<SyntheticCluster> out;
  for (Maneuver m : kSvManeuvers) {
    std::seed_seq seq{std::uint64_t(seed), std::uint64_t(static_cast<int>(m)) + 1};
    std::mt19937_64 rng(seq);
    SyntheticCluster cluster;
    cluster.maneuver = m;
    const int direction = target_lane(m) - origin_lane(m);
    for (int n = 0; n < opt.trajectories; ++n) {
      const Vec3 q_lat(log_uniform(rng, opt.q_lat_nominal(0), opt.q_spread),
                       log_uniform(rng, opt.q_lat_nominal(1), opt.q_spread),
                       log_uniform(rng, opt.q_lat_nominal(2), opt.q_spread));
      const Vec2 q_lon(log_uniform(rng, opt.q_lon_nominal(0), opt.q_spread),
                       log_uniform(rng, opt.q_lon_nominal(1), opt.q_spread));
      const Vec3 k_lat = axis_lqr_gain(Axis::Lateral, q_lat, opt.T);
      const Vec2 k_lon = axis_lqr_gain(Axis::Longitudinal, q_lon, opt.T);

      double y0 = 0.0;
      double y_ref = 0.0;
      if (direction == 0) {
        y_ref = clipped_normal(rng, 0.0, opt.keep_bias_std, 2.5 * opt.keep_bias_std);
        y0 = clipped_normal(rng, y_ref, opt.keep_start_std, 3.0 * opt.keep_start_std);
      } else {
        y0 = clipped_normal(rng, 0.0, opt.start_offset_std, 2.0 * opt.start_offset_std);
        y_ref = clipped_normal(rng, direction * geometry.lane_width, opt.target_offset_std,
                               2.5 * opt.target_offset_std);
      }
      std::uniform_real_distribution<double> speed(opt.speed_min, opt.speed_max);
      const double v0 = speed(rng);
      const double v_ref = std::max(
          0.0, clipped_normal(rng, v0, opt.speed_change_std, 2.5 * opt.speed_change_std));
      std::uniform_int_distribution<int> extra(0, opt.max_extra_steps);
      int remaining = -1;

      PrimitiveModel model = PrimitiveModel::make(opt.T, k_lon, k_lat, v_ref, y_ref);
      SvState s;
      s.vx = v0;
      s.y = y0;
      RawTrajectory tr;
      const int extra_steps = extra(rng);
      for (int j = 0; j < opt.max_steps; ++j) {
        tr.y.push_back(s.y);
        tr.vx.push_back(s.vx);
        const bool settled = std::abs(s.y - y_ref) < 2e-4 && std::abs(s.vy) < 2e-4 &&
                             std::abs(s.ay) < 2e-4 && std::abs(s.vx - v_ref) < 2e-4 &&
                             std::abs(s.ax) < 2e-4;
        if (settled && remaining < 0) remaining = extra_steps;
        if (remaining == 0) break;
        if (remaining > 0) --remaining;
        s = step_primitive(s, model);
      }
      cluster.raw.push_back(std::move(tr));
      cluster.k_lon.push_back(k_lon);
      cluster.k_lat.push_back(k_lat);
    }
    out.push_back(std::move(cluster));
  }
  return out;
}

void write_cluster_csv(const std::filesystem::path& path, const std::vector<RawTrajectory>& raw) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "trajectory_id,step,y_meters,vx_meters_per_second\n";
  out << std::setprecision(17);
  for (std::size_t n = 0; n < raw.size(); ++n) {
    for (std::size_t j = 0; j < raw[n].size(); ++j) {
      out << n << ',' << j << ',' << raw[n].y[j] << ',' << raw[n].vx[j] << '\n';
    }
  }
}

std::vector<RawTrajectory> read_cluster_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ":1", "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "trajectory_id,step,y_meters,vx_meters_per_second") {
    throw ParseError(path.string() + ":1", "unexpected header '" + line + "'");
  }
  std::vector<RawTrajectory> out;
  std::map<std::string, std::size_t> index;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    std::stringstream ss(line);
    std::string id, step, y, vx;
    if (!std::getline(ss, id, ',') || !std::getline(ss, step, ',') || !std::getline(ss, y, ',') ||
        !std::getline(ss, vx)) {
      throw ParseError(where, "expected 4 comma-separated fields");
    }
    auto [it, inserted] = index.try_emplace(id, out.size());
    if (inserted) out.emplace_back();
    RawTrajectory& tr = out[it->second];
    try {
      std::size_t used = 0;
      const long j = std::stol(step, &used);
      if (used != step.size() || j != long(tr.size())) {
        throw ParseError(where, "steps of trajectory '" + id + "' must be consecutive from 0");
      }
      tr.y.push_back(std::stod(y));
      tr.vx.push_back(std::stod(vx));
    } catch (const std::logic_error&) {
      throw ParseError(where, "malformed number");
    }
    if (!std::isfinite(tr.y.back()) || !std::isfinite(tr.vx.back())) {
      throw ParseError(where, "non-finite value");
    }
  }
  return out;
}

}  // namespace isa
