#include <gtest/gtest.h>

#include <cmath>

#include "isa/primitives/gain_set.hpp"
#include "isa/uncertainty/quantify.hpp"

using namespace isa;

namespace {

constexpr double kT = 0.32;

const GainLibrary& library() {
  static const GainLibrary lib = identify_synthetic(2023, LaneGeometry{}, kT, 40);
  return lib;
}

double sample_std(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x / double(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size() - 1));
}

}  // namespace

TEST(Quantify, SingleGainGivesZeroSpread) {
  GainSet set;
  set.maneuver = Maneuver::M1;
  set.lon_gains = {Vec2(0.1, 0.3)};
  set.lat_gains = {Vec3(0.1, 0.4, 0.5)};
  set.finalize();
  Rng rng(1);
  const StdTrack tr = quantify({0, 10, 0, 1.875, 0, 0}, 15.0, 5.625, set, 20, 25, kT, rng);
  ASSERT_EQ(tr.sigma_x.size(), 25u);
  for (int t = 0; t < 25; ++t) {
    EXPECT_NEAR(tr.sigma_x[t], 0.0, 1e-12);
    EXPECT_NEAR(tr.sigma_y[t], 0.0, 1e-12);
  }
}

TEST(Quantify, MatchesDirectSampleStd) {
  const GainSet& set = library().at(Maneuver::M1);
  const SvState s{0, 10, 0, 1.875, 0, 0};
  Rng a(9), b(9);
  const auto rolls = sample_rollouts(s, 15.0, 5.625, set, 50, 25, kT, a);
  const StdTrack tr = quantify(s, 15.0, 5.625, set, 50, 25, kT, b);
  for (int t = 0; t < 25; ++t) {
    std::vector<double> xs, ys;
    for (const auto& r : rolls) {
      xs.push_back(r.x[t]);
      ys.push_back(r.y[t]);
    }
    EXPECT_NEAR(tr.sigma_x[t], sample_std(xs), 1e-9);
    EXPECT_NEAR(tr.sigma_y[t], sample_std(ys), 1e-9);
  }
}

TEST(Quantify, SeededRunsAreIdentical) {
  const GainSet& set = library().at(Maneuver::M1);
  Rng a(3), b(3);
  const auto ta = quantify({0, 12, 0, 1.875, 0, 0}, 15.0, 5.625, set, 30, 25, kT, a);
  const auto tb = quantify({0, 12, 0, 1.875, 0, 0}, 15.0, 5.625, set, 30, 25, kT, b);
  EXPECT_EQ(ta.sigma_x, tb.sigma_x);
  EXPECT_EQ(ta.sigma_y, tb.sigma_y);
}

TEST(Quantify, TranslationInvariant) {
  const GainSet& set = library().at(Maneuver::M4);
  Rng a(5), b(5);
  const auto ta = quantify({0, 20, 0, 5.625, 0, 0}, 22.0, 9.375, set, 30, 25, kT, a);
  const auto tb = quantify({137.5, 20, 0, 5.625, 0, 0}, 22.0, 9.375, set, 30, 25, kT, b);
  for (int t = 0; t < 25; ++t) {
    EXPECT_NEAR(ta.sigma_x[t], tb.sigma_x[t], 1e-9);
    EXPECT_NEAR(ta.sigma_y[t], tb.sigma_y[t], 1e-12);
  }
}

TEST(Quantify, SampleCountConverges) {
  // sigma at K = 30 and K = 200 agree within 3 standard errors of the
  // smaller sample (SE of a sample STD is about sigma / sqrt(2 (n - 1))).
  const GainSet& set = library().at(Maneuver::M1);
  Rng a(21), b(22);
  const SvState s{0, 10, 0, 1.875, 0, 0};
  const auto small = quantify(s, 15.0, 5.625, set, 30, 25, kT, a);
  const auto large = quantify(s, 15.0, 5.625, set, 200, 25, kT, b);
  for (int t = 0; t < 25; ++t) {
    const double se = large.sigma_y[t] / std::sqrt(2.0 * 29.0);
    EXPECT_LE(std::abs(small.sigma_y[t] - large.sigma_y[t]), 3.0 * se + 1e-12) << "t = " << t;
    const double se_x = large.sigma_x[t] / std::sqrt(2.0 * 29.0);
    EXPECT_LE(std::abs(small.sigma_x[t] - large.sigma_x[t]), 3.0 * se_x + 1e-12) << "t = " << t;
  }
}

TEST(Quantify, FirstStepSpreadIsSmall) {
  const GainSet& set = library().at(Maneuver::M1);
  Rng rng(4);
  const auto tr = quantify({0, 10, 0, 1.875, 0, 0}, 15.0, 5.625, set, 100, 25, kT, rng);
  EXPECT_LT(tr.sigma_y[0], 0.05);
  EXPECT_LT(tr.sigma_x[0], 0.05);
  for (int t = 0; t < 25; ++t) {
    EXPECT_GE(tr.sigma_x[t], 0.0);
    EXPECT_GE(tr.sigma_y[t], 0.0);
  }
}

TEST(Quantify, RequiresTwoSamples) {
  Rng rng(1);
  EXPECT_THROW(quantify({}, 10, 0, library().at(Maneuver::M0), 1, 25, kT, rng),
               std::invalid_argument);
}

TEST(Quantify, LaneKeepUsesClusterConstant) {
  const GainSet& set = library().at(Maneuver::M3);
  Rng rng(2);
  const auto tr = quantify_maneuver({0, 25, 0, 5.625, 0, 0}, 25.0, 5.625, set, 30, 25, kT, rng);
  for (double s : tr.sigma_y) EXPECT_DOUBLE_EQ(s, set.lane_keep_sigma_y);
  EXPECT_GT(set.lane_keep_sigma_y, 0.0);
  // Sampled lateral spread of a centered lane keep stays within twice the
  // cluster constant.
  Rng rng2(2);
  const auto sampled = quantify({0, 25, 0, 5.625, 0, 0}, 25.0, 5.625, set, 30, 25, kT, rng2);
  for (double s : sampled.sigma_y) EXPECT_LE(s, 2.0 * set.lane_keep_sigma_y);
}

TEST(LaneKeepStd, DegenerateClusters) {
  RawTrajectory tr{{0.1, 0.2, 0.1, 0.0}, {20, 20, 20, 20}};
  EXPECT_NEAR(lane_keep_std(normalize_cluster(Maneuver::M0, {tr, tr, tr}, kT)), 0.0, 1e-12);
  // Two trajectories offset by a constant 2 s: per-step STD is s = sqrt(2).
  RawTrajectory a{{0, 0, 0, 0}, {20, 20, 20, 20}};
  RawTrajectory b{{2, 2, 2, 2}, {20, 20, 20, 20}};
  EXPECT_NEAR(lane_keep_std(normalize_cluster(Maneuver::M0, {a, b}, kT)), std::sqrt(2.0), 1e-12);
}

TEST(LaneKeepStd, WithinPerStepRange) {
  const auto clusters = synthesize_clusters(2023, LaneGeometry{});
  const auto c = normalize_cluster(Maneuver::M0, clusters[0].raw, kT);
  const auto sd = lateral_step_std(c);
  const double s = lane_keep_std(c);
  EXPECT_GE(s, *std::min_element(sd.begin(), sd.end()));
  EXPECT_LE(s, *std::max_element(sd.begin(), sd.end()));
}
