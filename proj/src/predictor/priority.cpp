#include "isa/predictor/priority.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace isa {

namespace {
double terminal(const SvState& s, int horizon, double T) { return s.x + s.vx * horizon * T; }
int lane(const SvState& s, const LaneGeometry& g) { return lane_index_clamped(s.y, g.lane_width); }
}  // namespace

std::vector<std::size_t> build_priority_list(const std::vector<SvObservation>& svs,
                                             const LaneGeometry& geometry, int horizon, double T) {
  std::array<std::vector<std::size_t>, LaneGeometry::kLaneCount> lanes;
  for (std::size_t i = 0; i < svs.size(); ++i) lanes[lane(svs[i].state, geometry) - 1].push_back(i);
  for (auto& q : lanes) {
    std::stable_sort(q.begin(), q.end(), [&](std::size_t a, std::size_t b) {
      if (svs[a].state.x != svs[b].state.x) return svs[a].state.x > svs[b].state.x;
      return svs[a].id < svs[b].id;
    });
  }
  std::array<std::size_t, LaneGeometry::kLaneCount> head{};
  std::vector<std::size_t> order;
  order.reserve(svs.size());
  while (order.size() < svs.size()) {
    int best = -1;
    for (int l = 0; l < LaneGeometry::kLaneCount; ++l) {
      if (head[l] >= lanes[l].size()) continue;
      if (best < 0) {
        best = l;
        continue;
      }
      const auto& a = svs[lanes[l][head[l]]].state;
      const auto& b = svs[lanes[best][head[best]]].state;
      if (terminal(a, horizon, T) > terminal(b, horizon, T)) best = l;
    }
    order.push_back(lanes[best][head[best]++]);
  }
  return order;
}

bool priority_rules_hold(const std::vector<SvObservation>& svs,
                         const std::vector<std::size_t>& order, const LaneGeometry& geometry,
                         int horizon, double T) {
  if (order.size() != svs.size()) return false;
  std::vector<bool> seen(svs.size(), false);
  for (std::size_t i : order) {
    if (i >= svs.size() || seen[i]) return false;
    seen[i] = true;
  }
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const auto& a = svs[order[k]].state;
    const auto& b = svs[order[k + 1]].state;
    const int la = lane(a, geometry);
    const int lb = lane(b, geometry);
    if (la == lb && a.x < b.x) return false;
    if (std::abs(la - lb) == 1 && terminal(a, horizon, T) < terminal(b, horizon, T)) return false;
  }
  return true;
}

}  // namespace isa
