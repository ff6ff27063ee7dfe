#include "isa/uncertainty/quantify.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace isa {

std::vector<Rollout> sample_rollouts(const SvState& state, double v_ref, double y_ref,
                                     const GainSet& gains, int samples, int horizon, double T,
                                     Rng& rng) {
  if (gains.lon_gains.empty() || gains.lat_gains.empty()) {
    throw std::invalid_argument("sample_rollouts: empty gain set");
  }
  std::uniform_int_distribution<std::size_t> lon(0, gains.lon_gains.size() - 1);
  std::uniform_int_distribution<std::size_t> lat(0, gains.lat_gains.size() - 1);
  std::vector<Rollout> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const std::size_t a = lon(rng);
    const std::size_t b = lat(rng);
    const auto model = PrimitiveModel::make(T, gains.lon_gains[a], gains.lat_gains[b], v_ref, y_ref);
    out.push_back(rollout_positions(state, model, horizon));
  }
  return out;
}

namespace {
std::vector<double> column_std(const std::vector<Rollout>& rollouts, bool use_x, int horizon) {
  std::vector<double> out(horizon, 0.0);
  const double n = double(rollouts.size());
  for (int t = 0; t < horizon; ++t) {
    double mean = 0.0;
    for (const auto& r : rollouts) mean += use_x ? r.x[t] : r.y[t];
    mean /= n;
    double ss = 0.0;
    for (const auto& r : rollouts) {
      const double d = (use_x ? r.x[t] : r.y[t]) - mean;
      ss += d * d;
    }
    out[t] = std::sqrt(ss / (n - 1.0));
  }
  return out;
}
}  // namespace

StdTrack quantify(const SvState& state, double v_ref, double y_ref, const GainSet& gains,
                  int k_sam, int horizon, double T, Rng& rng) {
  if (k_sam < 2) throw std::invalid_argument("quantify: k_sam must be >= 2");
  const auto rollouts = sample_rollouts(state, v_ref, y_ref, gains, k_sam, horizon, T, rng);
  StdTrack track;
  track.maneuver = gains.maneuver;
  track.sigma_x = column_std(rollouts, true, horizon);
  track.sigma_y = column_std(rollouts, false, horizon);
  return track;
}

StdTrack quantify_maneuver(const SvState& state, double v_ref, double y_ref, const GainSet& gains,
                           int k_sam, int horizon, double T, Rng& rng) {
  StdTrack track = quantify(state, v_ref, y_ref, gains, k_sam, horizon, T, rng);
  if (is_lane_keep(gains.maneuver)) {
    track.sigma_y.assign(horizon, gains.lane_keep_sigma_y);
  }
  return track;
}

double lane_keep_std(const TrajectoryCluster& cluster) {
  const auto s = lateral_step_std(cluster);
  if (s.empty()) return 0.0;
  double sum = 0.0;
  for (double v : s) sum += v;
  return sum / double(s.size());
}

void write_rollouts_csv(const std::filesystem::path& path, const std::vector<Rollout>& rollouts) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "sample,step,x,y\n" << std::setprecision(10);
  for (std::size_t i = 0; i < rollouts.size(); ++i) {
    for (std::size_t t = 0; t < rollouts[i].x.size(); ++t) {
      out << i << ',' << t + 1 << ',' << rollouts[i].x[t] << ',' << rollouts[i].y[t] << '\n';
    }
  }
}

}  // namespace isa
