#include "isa/primitives/gain_set.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace isa {

void GainSet::finalize() {
  if (lon_gains.empty() || lat_gains.empty()) {
    throw std::invalid_argument("GainSet " + std::string(to_string(maneuver)) + " is empty");
  }
  mean_lon.setZero();
  for (const auto& k : lon_gains) mean_lon += k;
  mean_lon /= double(lon_gains.size());
  mean_lat.setZero();
  for (const auto& k : lat_gains) mean_lat += k;
  mean_lat /= double(lat_gains.size());
}

GainLibrary::GainLibrary(std::vector<GainSet> sets) : sets_(std::move(sets)) {
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (sets_[i].maneuver == sets_[j].maneuver) {
        throw std::invalid_argument("GainLibrary: duplicate maneuver");
      }
    }
  }
}

const GainSet& GainLibrary::at(Maneuver m) const {
  for (const auto& s : sets_) {
    if (s.maneuver == m) return s;
  }
  throw std::out_of_range("no gain set for maneuver " + std::string(to_string(m)));
}

bool GainLibrary::contains(Maneuver m) const {
  for (const auto& s : sets_) {
    if (s.maneuver == m) return true;
  }
  return false;
}

GainSet build_gain_set(const TrajectoryCluster& cluster, const IdentificationOptions& options) {
  if (cluster.trajectories.empty()) {
    throw std::invalid_argument("build_gain_set: empty cluster for " +
                                std::string(to_string(cluster.maneuver)));
  }
  IdentificationOptions opt = options;
  opt.T = cluster.T;
  GainSet set;
  set.maneuver = cluster.maneuver;
  for (const auto& tr : cluster.trajectories) {
    const auto lat = identify_gain(tr.y, Axis::Lateral, opt);
    const auto lon = identify_gain(tr.vx, Axis::Longitudinal, opt);
    set.lat_gains.emplace_back(lat.gain);
    set.lon_gains.emplace_back(lon.gain);
    set.warnings += int(lat.warning) + int(lon.warning);
  }
  set.finalize();
  if (is_lane_keep(cluster.maneuver)) {
    const auto std_y = lateral_step_std(cluster);
    double sum = 0.0;
    for (double s : std_y) sum += s;
    set.lane_keep_sigma_y = std_y.empty() ? 0.0 : sum / double(std_y.size());
  }
  return set;
}

GainLibrary build_gain_sets(const std::vector<TrajectoryCluster>& clusters,
                            const IdentificationOptions& options) {
  std::vector<GainSet> sets;
  for (const auto& c : clusters) sets.push_back(build_gain_set(c, options));
  return GainLibrary(std::move(sets));
}

GainLibrary identify_synthetic(std::uint64_t seed, const LaneGeometry& geometry, double T,
                               int trajectories_per_maneuver) {
  SynthesisOptions syn;
  syn.T = T;
  syn.trajectories = trajectories_per_maneuver;
  std::vector<TrajectoryCluster> clusters;
  for (auto& c : synthesize_clusters(seed, geometry, syn)) {
    clusters.push_back(normalize_cluster(c.maneuver, std::move(c.raw), T));
  }
  IdentificationOptions opt;
  opt.T = T;
  return build_gain_sets(clusters, opt);
}

namespace {
using nlohmann::json;

template <int N>
json gains_to_json(const std::vector<Eigen::Matrix<double, N, 1>>& gains) {
  json arr = json::array();
  for (const auto& k : gains) {
    json row = json::array();
    for (int i = 0; i < N; ++i) row.push_back(k(i));
    arr.push_back(row);
  }
  return arr;
}

template <int N>
std::vector<Eigen::Matrix<double, N, 1>> gains_from_json(const json& arr, const std::string& where) {
  std::vector<Eigen::Matrix<double, N, 1>> out;
  for (const auto& row : arr) {
    if (!row.is_array() || row.size() != N) {
      throw ParseError(where, "expected rows of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> k;
    for (int i = 0; i < N; ++i) k(i) = row[i].get<double>();
    out.push_back(k);
  }
  return out;
}
}  // namespace

void save_gain_cache(const std::filesystem::path& path, const GainLibrary& library,
                     const GainCacheMeta& meta) {
  json maneuvers = json::object();
  for (const auto& s : library.sets()) {
    maneuvers[std::string(to_string(s.maneuver))] = {{"lon", gains_to_json<2>(s.lon_gains)},
                                                     {"lat", gains_to_json<3>(s.lat_gains)},
                                                     {"lane_keep_sigma_y", s.lane_keep_sigma_y},
                                                     {"warnings", s.warnings}};
  }
  json root{{"T", meta.T},
            {"seed", meta.seed},
            {"trajectories", meta.trajectories},
            {"source", meta.source},
            {"maneuvers", maneuvers}};
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << root.dump(2) << '\n';
}

std::pair<GainLibrary, GainCacheMeta> load_gain_cache(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  json root;
  try {
    root = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ":byte " + std::to_string(e.byte), e.what());
  }
  try {
    GainCacheMeta meta;
    meta.T = root.at("T").get<double>();
    meta.seed = root.at("seed").get<std::uint64_t>();
    meta.trajectories = root.at("trajectories").get<int>();
    meta.source = root.value("source", std::string("synthetic"));
    std::vector<GainSet> sets;
    for (auto it = root.at("maneuvers").begin(); it != root.at("maneuvers").end(); ++it) {
      const std::string where = path.string() + ":/maneuvers/" + it.key();
      GainSet s;
      try {
        s.maneuver = maneuver_from_string(it.key());
      } catch (const std::invalid_argument& e) {
        throw ParseError(where, e.what());
      }
      s.lon_gains = gains_from_json<2>(it->at("lon"), where + "/lon");
      s.lat_gains = gains_from_json<3>(it->at("lat"), where + "/lat");
      s.lane_keep_sigma_y = it->value("lane_keep_sigma_y", 0.0);
      s.warnings = it->value("warnings", 0);
      try {
        s.finalize();
      } catch (const std::invalid_argument& e) {
        throw ParseError(where, e.what());
      }
      sets.push_back(std::move(s));
    }
    return {GainLibrary(std::move(sets)), meta};
  } catch (const json::exception& e) {
    throw ParseError(path.string(), e.what());
  }
}

}  // namespace isa
