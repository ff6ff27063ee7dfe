// Command-line entry point: identify, simulate, montecarlo, occupancy, timing.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "isa/sim/monte_carlo.hpp"
#include "isa/sim/output.hpp"
#include "isa/sim/simulation.hpp"

namespace fs = std::filesystem;
using namespace isa;

namespace {

fs::path output_dir() {
  const char* env = std::getenv("ISA_OUTPUT_DIR");
  return env && *env ? fs::path(env) : fs::path("output");
}

struct PlannerFlags {
  std::string kind;
  double eps = -1.0;
  int k_sc = -1;
  long long seed = -1;
};

void add_planner_flags(CLI::App* cmd, PlannerFlags& f) {
  cmd->add_option("--planner", f.kind, "isa, scmpc or deterministic")
      ->check(CLI::IsMember({"isa", "scmpc", "deterministic"}));
  cmd->add_option("--eps", f.eps, "safety-awareness level in (0, 1]");
  cmd->add_option("--ksc", f.k_sc, "scenario count of the scmpc planner")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "override the scenario seed")->check(CLI::NonNegativeNumber);
}

ScenarioConfig load_with_flags(const std::string& path, const PlannerFlags& f) {
  ScenarioConfig c = load_scenario(path);
  if (!f.kind.empty()) c.planner.kind = planner_kind_from_string(f.kind);
  if (f.eps >= 0.0) c.planner.epsilon = f.eps;
  if (f.k_sc > 0) c.planner.k_sc = f.k_sc;
  if (f.seed >= 0) c.seed = std::uint64_t(f.seed);
  c.validate();
  return c;
}

std::string planner_label(const PlannerParams& p) {
  std::ostringstream os;
  switch (p.kind) {
    case PlannerKind::Isa: os << "isa_eps" << format_number(p.epsilon); break;
    case PlannerKind::Scmpc: os << "scmpc_k" << p.k_sc; break;
    case PlannerKind::Deterministic: os << "deterministic"; break;
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction- and safety-aware motion planning: simulation tools"};
  app.require_subcommand(1);

  // identify
  auto* identify = app.add_subcommand("identify", "identify gain sets and write the gain cache");
  std::uint64_t id_seed = 2023;
  int id_traj = 40;
  double id_dt = 0.32;
  std::string id_clusters, id_out, id_write_clusters;
  identify->add_option("--seed", id_seed, "synthetic-cluster seed");
  identify->add_option("--trajectories", id_traj, "trajectories per maneuver")
      ->check(CLI::PositiveNumber);
  identify->add_option("--dt", id_dt, "sampling interval in seconds")->check(CLI::PositiveNumber);
  identify->add_option("--clusters", id_clusters, "directory with m0.csv .. m6.csv");
  identify->add_option("--out", id_out, "cache path (default <output>/gains.json)");
  identify->add_option("--write-clusters", id_write_clusters,
                       "also write the synthetic clusters as CSV to this directory");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "run one closed-loop simulation");
  std::string sim_cfg;
  PlannerFlags sim_flags;
  simulate->add_option("config", sim_cfg, "scenario file")->required()->check(CLI::ExistingFile);
  add_planner_flags(simulate, sim_flags);

  // montecarlo
  auto* mc = app.add_subcommand("montecarlo", "paired Monte Carlo MED study");
  std::string mc_cfg;
  int mc_replicas = 50;
  int mc_threads = 0;
  std::vector<double> mc_eps{0.1, 0.4};
  mc->add_option("config", mc_cfg, "scenario file")->required()->check(CLI::ExistingFile);
  mc->add_option("--replicas", mc_replicas, "number of replicas")->check(CLI::PositiveNumber);
  mc->add_option("--threads", mc_threads, "worker threads (0: hardware concurrency)");
  mc->add_option("--eps", mc_eps, "ISA levels compared against the deterministic baseline");

  // occupancy
  auto* occ = app.add_subcommand("occupancy", "dump the occupancy rectangles of one step");
  std::string occ_cfg;
  int occ_step = 0;
  PlannerFlags occ_flags;
  occ->add_option("config", occ_cfg, "scenario file")->required()->check(CLI::ExistingFile);
  occ->add_option("--step", occ_step, "time step")->required()->check(CLI::NonNegativeNumber);
  add_planner_flags(occ, occ_flags);

  // timing
  auto* timing = app.add_subcommand("timing", "per-stage computation time report");
  std::string tim_cfg;
  PlannerFlags tim_flags;
  timing->add_option("config", tim_cfg, "scenario file")->required()->check(CLI::ExistingFile);
  add_planner_flags(timing, tim_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out = output_dir();
    if (identify->parsed()) {
      GainSource src;
      src.seed = id_seed;
      src.trajectories_per_maneuver = id_traj;
      src.cluster_dir = id_clusters;
      src.cache_path = id_out.empty() ? (out / "gains.json").string() : id_out;
      if (fs::exists(src.cache_path)) fs::remove(src.cache_path);
      const LaneGeometry road;
      const GainLibrary lib = load_gains(src, road, id_dt);
      if (!id_write_clusters.empty()) {
        SynthesisOptions so;
        so.T = id_dt;
        so.trajectories = id_traj;
        for (const auto& c : synthesize_clusters(id_seed, road, so)) {
          write_cluster_csv(fs::path(id_write_clusters) / (std::string(to_string(c.maneuver)) + ".csv"),
                            c.raw);
        }
      }
      for (const auto& s : lib.sets()) {
        std::cout << to_string(s.maneuver) << ": " << s.lon_gains.size() << " gains, mean lon ["
                  << format_number(s.mean_lon(0)) << ", " << format_number(s.mean_lon(1))
                  << "], mean lat [" << format_number(s.mean_lat(0)) << ", "
                  << format_number(s.mean_lat(1)) << ", " << format_number(s.mean_lat(2))
                  << "], warnings " << s.warnings << "\n";
      }
      std::cout << "wrote " << src.cache_path << "\n";
      return 0;
    }

    if (simulate->parsed()) {
      const ScenarioConfig c = load_with_flags(sim_cfg, sim_flags);
      const GainLibrary gains = load_gains(c.gains, c.road, c.dt);
      const SimTrace trace = run_closed_loop(c, gains);
      const std::string stem = c.name + "_" + planner_label(c.planner);
      write_trace_csv(out / (stem + "_trace.csv"), trace);
      write_diagnostics_csv(out / (stem + "_diagnostics.csv"), trace);
      std::cout << "wrote " << (out / (stem + "_trace.csv")).string() << " and "
                << (out / (stem + "_diagnostics.csv")).string() << "\n";
      if (!c.med_vehicle.empty()) {
        std::cout << "MED to " << c.med_vehicle << ": " << format_number(med(trace, c.med_vehicle))
                  << " m\n";
      }
      std::cout << (trace.collision ? "collision at step " + std::to_string(trace.collision_step)
                                    : std::string("collision-free"))
                << "\n";
      return 0;
    }

    if (mc->parsed()) {
      const ScenarioConfig c = load_with_flags(mc_cfg, {});
      const GainLibrary gains = load_gains(c.gains, c.road, c.dt);
      std::vector<PlannerVariant> variants;
      for (double e : mc_eps) {
        variants.push_back({"isa_eps" + format_number(e), PlannerKind::Isa, e, c.planner.k_sc});
      }
      const PlannerVariant base{"deterministic", PlannerKind::Deterministic, c.planner.epsilon,
                                c.planner.k_sc};
      const auto res = run_monte_carlo(c, gains, mc_replicas, variants, base, mc_threads);
      const fs::path file = out / (c.name + "_med.json");
      write_text(file, med_json(res));
      for (const auto& s : res.stats) {
        std::cout << s.label << " - deterministic: mean " << format_number(s.mean) << " m, std "
                  << format_number(s.std) << " m, min " << format_number(s.min) << " m\n";
      }
      std::cout << "wrote " << file.string() << "\n";
      return 0;
    }

    if (occ->parsed()) {
      ScenarioConfig c = load_with_flags(occ_cfg, occ_flags);
      if (occ_step >= c.steps) c.steps = occ_step + 1;
      const GainLibrary gains = load_gains(c.gains, c.road, c.dt);
      SimOptions opt;
      opt.record_occupancy_step = occ_step;
      StepCapture cap;
      run_closed_loop(c, gains, opt, &cap);
      const std::string stem = c.name + "_" + planner_label(c.planner) + "_step" + std::to_string(occ_step);
      write_rect_csv(out / (stem + "_rects.csv"), cap.output.occupancy, occ_step);
      write_text(out / (stem + "_predictions.json"), predictions_to_json(cap.predictions, occ_step));
      std::cout << "wrote " << (out / (stem + "_rects.csv")).string() << " and "
                << (out / (stem + "_predictions.json")).string() << "\n";
      return 0;
    }

    if (timing->parsed()) {
      const ScenarioConfig c = load_with_flags(tim_cfg, tim_flags);
      const GainLibrary gains = load_gains(c.gains, c.road, c.dt);
      const SimTrace trace = run_closed_loop(c, gains);
      const TimingReport r = timing_report(trace, c.dt);
      std::cout << "planner " << planner_label(c.planner) << ", " << r.steps << " steps\n"
                << "planning time: mean " << format_number(r.planning.mean) << " s, std "
                << format_number(r.planning.std) << " s\n"
                << "OCP time:      mean " << format_number(r.ocp.mean) << " s, std "
                << format_number(r.ocp.std) << " s\n"
                << "OCP mean " << (r.ocp.mean <= r.budget ? "within" : "exceeds") << " the "
                << format_number(r.budget) << " s budget; " << r.over_budget
                << " planning steps over budget\n";
      const fs::path file = out / (c.name + "_" + planner_label(c.planner) + "_timing.json");
      write_text(file, timing_json(r));
      std::cout << "wrote " << file.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
