#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "isa/sim/monte_carlo.hpp"
#include "isa/sim/simulation.hpp"

namespace isa {

/// Shortest round-trip-stable text for a double ("inf" for infinities).
std::string format_number(double v);

/// Long-format trace: one row per (step, vehicle). File layouts are
/// documented in docs/outputs.md.
void write_trace_csv(const std::filesystem::path& path, const SimTrace& trace);

/// Planner diagnostics per step. Wall times are left out so that repeated
/// runs produce identical files; they go to the timing report.
void write_diagnostics_csv(const std::filesystem::path& path, const SimTrace& trace);

/// Rectangles of one planning step: sv, t, center, extents.
void write_rect_csv(const std::filesystem::path& path, const std::vector<SvOccupancy>& rects,
                    int step);

std::string med_json(const MonteCarloResult& result);

struct StageTiming {
  double mean = 0.0;
  double std = 0.0;
  double max = 0.0;
};
struct TimingReport {
  StageTiming planning;
  StageTiming ocp;
  int steps = 0;
  int over_budget = 0;  // steps whose planning time exceeded T
  double budget = 0.32;
};
TimingReport timing_report(const SimTrace& trace, double budget);
std::string timing_json(const TimingReport& report);

/// Writes text to a file, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace isa
