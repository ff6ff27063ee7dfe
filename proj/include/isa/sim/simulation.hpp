#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isa/planner/planner.hpp"
#include "isa/world/scenario.hpp"

namespace isa {

/// Gains for a scenario: the cache file when it exists and matches, else the
/// clusters in `cluster_dir`, else synthetic clusters. A configured cache
/// path that does not exist yet is written.
GainLibrary load_gains(const GainSource& source, const LaneGeometry& geometry, double T);

/// Per-step record of the EV planner.
struct PlanDiagnostics {
  Maneuver maneuver = Maneuver::VT1;
  double v_ref = 0.0;
  double y_ref = 0.0;
  std::array<double, 3> costs{};
  std::array<double, 3> probabilities{};
  std::array<double, 3> option_v_ref{};
  std::array<std::string, 3> option_binding;
  std::string binding_sv;  // SV limiting the chosen target speed
  std::vector<double> dv;
  SolverStatus status = SolverStatus::Degraded;
  int iterations = 0;
  double max_rho = 0.0;
  Input input = Input::Zero();
  double planning_time = 0.0;  // seconds
  double ocp_time = 0.0;       // seconds
};

struct SimStep {
  int step = 0;
  double time = 0.0;
  Vec8 ego = Vec8::Zero();
  std::vector<SvState> svs;          // same order as SimTrace::sv_ids
  std::vector<Maneuver> maneuvers;   // current SV maneuvers
  PlanDiagnostics plan;
  std::vector<std::string> events;   // events fired at this step
};

struct SimTrace {
  std::string scenario;
  std::string planner;
  std::vector<std::string> sv_ids;
  std::vector<SimStep> steps;
  bool collision = false;
  int collision_step = -1;

  std::size_t sv_index(const std::string& id) const;
};

struct SimOptions {
  int replica = 0;           // selects the random streams
  int record_occupancy_step = -1;  // keep the planner output of this step
};

/// Optional capture of one step's planner internals.
struct StepCapture {
  int step = -1;
  PredictionSet predictions;
  PlanOutput output;
};

/// Closed-loop run. SVs follow their scripts and primitive models without
/// reacting to the EV; the EV applies the first input of each plan. Two
/// independent streams per replica: traffic (gain resampling) and planner.
SimTrace run_closed_loop(const ScenarioConfig& config, const GainLibrary& gains,
                         const SimOptions& options = {}, StepCapture* capture = nullptr);

/// Minimum center distance between the EV and an SV over the trace.
/// Throws std::out_of_range when the SV is absent.
double med(const SimTrace& trace, const std::string& sv);

/// True when the axis-aligned footprints overlap.
bool footprints_overlap(double x1, double y1, double x2, double y2, const VehicleShape& shape);

}  // namespace isa
