#include "isa/sim/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace isa {

PlannerParams apply_variant(PlannerParams p, const PlannerVariant& v) {
  p.kind = v.kind;
  p.epsilon = v.epsilon;
  p.k_sc = v.k_sc;
  return p;
}

MedStat summarize(std::string label, std::vector<double> d_min, const std::vector<double>& base) {
  if (d_min.size() != base.size() || d_min.empty()) {
    throw std::invalid_argument("summarize: mismatched or empty samples");
  }
  MedStat s;
  s.label = std::move(label);
  s.d_min = std::move(d_min);
  for (std::size_t i = 0; i < base.size(); ++i) s.difference.push_back(s.d_min[i] - base[i]);
  const double n = double(s.difference.size());
  double sum = 0.0;
  for (double d : s.difference) sum += d;
  s.mean = sum / n;
  double ss = 0.0;
  for (double d : s.difference) ss += (d - s.mean) * (d - s.mean);
  s.std = s.difference.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.min = *std::min_element(s.difference.begin(), s.difference.end());
  s.max = *std::max_element(s.difference.begin(), s.difference.end());
  return s;
}

MonteCarloResult run_monte_carlo(const ScenarioConfig& config, const GainLibrary& gains,
                                 int replicas, const std::vector<PlannerVariant>& variants,
                                 const PlannerVariant& baseline, int threads) {
  if (replicas < 1) throw std::invalid_argument("run_monte_carlo: replicas must be >= 1");
  if (config.med_vehicle.empty()) throw std::invalid_argument("run_monte_carlo: med_vehicle not set");

  std::vector<PlannerVariant> all = variants;
  all.push_back(baseline);
  const std::size_t V = all.size();
  std::vector<double> dmin(V * std::size_t(replicas), 0.0);
  std::vector<int> collided(V * std::size_t(replicas), 0);

  const std::size_t jobs = V * std::size_t(replicas);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      try {
        const std::size_t v = j % V;
        const int r = int(j / V);
        ScenarioConfig c = config;
        c.planner = apply_variant(config.planner, all[v]);
        SimOptions opt;
        opt.replica = r;
        const SimTrace trace = run_closed_loop(c, gains, opt);
        dmin[j] = med(trace, config.med_vehicle);
        collided[j] = trace.collision ? 1 : 0;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned n = threads > 0 ? unsigned(threads) : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, unsigned(jobs));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  auto column = [&](std::size_t v) {
    std::vector<double> out;
    for (int r = 0; r < replicas; ++r) out.push_back(dmin[std::size_t(r) * V + v]);
    return out;
  };
  MonteCarloResult res;
  res.sv = config.med_vehicle;
  res.baseline = baseline.label;
  res.baseline_d_min = column(V - 1);
  for (std::size_t v = 0; v + 1 < V; ++v) {
    auto s = summarize(all[v].label, column(v), res.baseline_d_min);
    for (int r = 0; r < replicas; ++r) s.collisions += collided[std::size_t(r) * V + v];
    res.stats.push_back(std::move(s));
  }
  return res;
}

}  // namespace isa
