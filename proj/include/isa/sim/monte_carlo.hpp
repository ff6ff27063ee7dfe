#pragma once

#include <string>
#include <vector>

#include "isa/sim/simulation.hpp"

namespace isa {

/// Planner variant of a Monte Carlo study.
struct PlannerVariant {
  std::string label;
  PlannerKind kind = PlannerKind::Isa;
  double epsilon = 0.2;
  int k_sc = 10;
};
PlannerParams apply_variant(PlannerParams base, const PlannerVariant& v);

/// Summary of d_min(variant) - d_min(baseline) over replicas. A single
/// replica has std 0.
struct MedStat {
  std::string label;
  std::vector<double> d_min;       // per replica
  std::vector<double> difference;  // per replica, minus the baseline
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  int collisions = 0;
};

struct MonteCarloResult {
  std::string sv;
  std::string baseline;
  std::vector<double> baseline_d_min;
  std::vector<MedStat> stats;  // one per non-baseline variant
};

/// Runs `replicas` paired replicas: replica r uses the same traffic stream
/// for every variant, so SV behavior is identical across planners.
/// `threads` <= 0 uses the hardware concurrency.
MonteCarloResult run_monte_carlo(const ScenarioConfig& config, const GainLibrary& gains,
                                 int replicas, const std::vector<PlannerVariant>& variants,
                                 const PlannerVariant& baseline, int threads = 0);

MedStat summarize(std::string label, std::vector<double> d_min, const std::vector<double>& base);

}  // namespace isa
