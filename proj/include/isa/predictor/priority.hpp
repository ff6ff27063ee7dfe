#pragma once

#include <string>
#include <vector>

#include "isa/world/lanes.hpp"

namespace isa {

struct SvObservation {
  std::string id;
  SvState state;
};

/// Priority order (indices into `svs`, highest first). Each lane is ordered
/// front to back; lanes are merged by repeatedly taking the lane head with
/// the largest constant-velocity terminal position x + vx*N*T. This keeps
/// same-lane pairs front-first and makes any adjacent pair from adjacent
/// lanes ordered by terminal position.
std::vector<std::size_t> build_priority_list(const std::vector<SvObservation>& svs,
                                             const LaneGeometry& geometry, int horizon, double T);

/// True when `order` satisfies both pairwise ranking rules for every pair
/// adjacent in the list.
bool priority_rules_hold(const std::vector<SvObservation>& svs,
                         const std::vector<std::size_t>& order, const LaneGeometry& geometry,
                         int horizon, double T);

}  // namespace isa
