#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isa/primitives/clusters.hpp"
#include "isa/primitives/gain_set.hpp"
#include "isa/primitives/identification.hpp"
#include "isa/primitives/lqr.hpp"
#include "isa/primitives/primitive_model.hpp"

using namespace isa;

namespace {

constexpr double kT = 0.32;

// Lateral closed loop written out from the block matrices, independent of
// the library's axis helpers.
std::vector<double> simulate_lateral(const Vec3& k, double y0, double vy0, double ay0, double target,
                                     int n) {
  const double T = kT;
  double y = y0, vy = vy0, ay = ay0;
  std::vector<double> out;
  for (int j = 0; j < n; ++j) {
    out.push_back(y);
    const double u = -(k(0) * (y - target) + k(1) * vy + k(2) * ay);
    const double y1 = y + T * vy + 0.5 * T * T * ay + T * T * T / 6.0 * u;
    const double vy1 = vy + T * ay + 0.5 * T * T * u;
    const double ay1 = ay + T * u;
    y = y1;
    vy = vy1;
    ay = ay1;
  }
  return out;
}

std::vector<double> simulate_speed(const Vec2& k, double v0, double a0, double target, int n) {
  const double T = kT;
  double v = v0, a = a0;
  std::vector<double> out;
  for (int j = 0; j < n; ++j) {
    out.push_back(v);
    const double u = -(k(0) * (v - target) + k(1) * a);
    const double v1 = v + T * a + 0.5 * T * T * u;
    a = a + T * u;
    v = v1;
  }
  return out;
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s / double(a.size()));
}

}  // namespace

TEST(PrimitiveModel, BlockMatricesMatchDefinition) {
  const auto m = PrimitiveModel::make(kT, Vec2::Zero(), Vec3::Zero(), 0.0, 0.0);
  Mat3 Ai;
  Ai << 1, kT, kT * kT / 2, 0, 1, kT, 0, 0, 1;
  EXPECT_TRUE((m.A.topLeftCorner<3, 3>().isApprox(Ai, 0.0)));
  EXPECT_TRUE((m.A.bottomRightCorner<3, 3>().isApprox(Ai, 0.0)));
  EXPECT_TRUE((m.A.topRightCorner<3, 3>().isZero(0.0)));
  EXPECT_EQ(m.B(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(m.B(1, 0), kT * kT / 2);
  EXPECT_DOUBLE_EQ(m.B(2, 0), kT);
  EXPECT_DOUBLE_EQ(m.B(3, 1), kT * kT * kT / 6);
  EXPECT_DOUBLE_EQ(m.B(4, 1), kT * kT / 2);
  EXPECT_DOUBLE_EQ(m.B(5, 1), kT);
  EXPECT_TRUE((m.B.block<3, 1>(3, 0).isZero(0.0)));
  EXPECT_TRUE((m.B.block<3, 1>(0, 1).isZero(0.0)));
}

TEST(PrimitiveModel, EquilibriumAtReferences) {
  const auto m = PrimitiveModel::make(kT, Vec2(0.2, 0.5), Vec3(0.1, 0.4, 0.6), 20.0, 5.625);
  SvState s{0.0, 20.0, 0.0, 5.625, 0.0, 0.0};
  const SvState n = step_primitive(s, m);
  EXPECT_DOUBLE_EQ(n.x, 20.0 * kT);
  EXPECT_DOUBLE_EQ(n.vx, 20.0);
  EXPECT_DOUBLE_EQ(n.y, 5.625);
  EXPECT_EQ(n.vy, 0.0);
  EXPECT_EQ(n.ax, 0.0);
  EXPECT_EQ(n.ay, 0.0);
}

TEST(PrimitiveModel, ConstantVelocityRow) {
  const auto m = PrimitiveModel::make(kT, Vec2(0.2, 0.5), Vec3(0.1, 0.4, 0.6), 10.0, 0.0);
  const SvState n = step_primitive({0.0, 10.0, 0.0, 0.0, 0.0, 0.0}, m);
  EXPECT_NEAR(n.x, 3.2, 1e-12);
  EXPECT_DOUBLE_EQ(n.vx, 10.0);
  EXPECT_EQ(n.y, 0.0);
}

TEST(PrimitiveModel, StateAffineInReferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  const Vec2 kl(0.1029, 0.3423);
  const Vec3 kt(0.0984, 0.4656, 0.5417);
  const SvState s0{3.0, 12.0, 0.4, 2.0, 0.1, -0.05};
  auto at = [&](double v, double y) {
    return rollout_positions(s0, PrimitiveModel::make(kT, kl, kt, v, y), 25);
  };
  const auto base = at(0.0, 0.0);
  const auto unit = at(1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double v = u(rng), y = u(rng) / 3.0;
    const auto r = at(v, y);
    for (int t = 0; t < 25; ++t) {
      EXPECT_NEAR(r.x[t] - base.x[t], v * (unit.x[t] - base.x[t]), 1e-9);
      EXPECT_NEAR(r.y[t] - base.y[t], y * (unit.y[t] - base.y[t]), 1e-9);
    }
  }
}

TEST(Lqr, RiccatiResidualAndStability) {
  const auto lat = lateral_axis(kT);
  const Eigen::MatrixXd A = lat.A, B = lat.B;
  const Eigen::MatrixXd Q = Vec3(0.3, 1.5, 0.02).asDiagonal();
  const Eigen::MatrixXd R = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::MatrixXd P = solve_dare(A, B, Q, R);
  const Eigen::MatrixXd S = R + B.transpose() * P * B;
  const Eigen::MatrixXd res =
      A.transpose() * P * A - A.transpose() * P * B * S.inverse() * B.transpose() * P * A + Q - P;
  EXPECT_LT(res.cwiseAbs().maxCoeff(), 1e-9 * (1.0 + P.cwiseAbs().maxCoeff()));
  const Eigen::MatrixXd K = dlqr(A, B, Q, R);
  EXPECT_TRUE(K.isApprox(S.inverse() * B.transpose() * P * A, 1e-10));
  EXPECT_LT(spectral_radius(A - B * K), 1.0);
}

TEST(Lqr, ScalarClosedForm) {
  // a = 1, b = 1, q = 1, r = 1: p^2 - p - 1 = 0 -> p = golden ratio.
  Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  EXPECT_NEAR(solve_dare(one, one, one, one)(0, 0), phi, 1e-12);
  EXPECT_NEAR(dlqr(one, one, one, one)(0, 0), phi / (1.0 + phi), 1e-12);
}

TEST(Identification, LateralRoundTripFromKnownGain) {
  const Eigen::VectorXd k = axis_lqr_gain(Axis::Lateral, Vec3(0.15, 0.3, 0.1), kT);
  const Vec3 kstar = k;
  const auto data = simulate_lateral(kstar, 0.1, 0.05, 0.0, 3.75, 40);
  const IdentifiedGain id = identify_gain(data, Axis::Lateral);
  const auto back = simulate_lateral(Vec3(id.gain), id.x0(0), id.x0(1), id.x0(2), data.back(), 40);
  EXPECT_LT(rmse(back, data), 1e-3 * 3.75);
  EXPECT_FALSE(id.warning);
  EXPECT_LT(spectral_radius(axis_closed_loop(Axis::Lateral, id.gain, kT)), 1.0);
}

TEST(Identification, LongitudinalRoundTripFromKnownGain) {
  const Vec2 kstar = axis_lqr_gain(Axis::Longitudinal, Vec2(0.08, 0.2), kT);
  const auto data = simulate_speed(kstar, 18.0, 0.3, 23.0, 50);
  const IdentifiedGain id = identify_gain(data, Axis::Longitudinal);
  const auto back = simulate_speed(Vec2(id.gain), id.x0(0), id.x0(1), data.back(), 50);
  EXPECT_LT(rmse(back, data), 1e-3 * 3.75);
  EXPECT_LT(spectral_radius(axis_closed_loop(Axis::Longitudinal, id.gain, kT)), 1.0);
}

TEST(Identification, ConstantTrajectoryKeepsInitialWeights) {
  const std::vector<double> flat(20, 3.75);
  const IdentifiedGain id = identify_gain(flat, Axis::Lateral);
  EXPECT_FALSE(id.warning);
  EXPECT_NEAR(id.cost, 0.0, 1e-20);
  EXPECT_TRUE(id.q.isApprox(Eigen::VectorXd::Ones(3), 1e-12));
  EXPECT_TRUE(id.gain.isApprox(axis_lqr_gain(Axis::Lateral, Eigen::VectorXd::Ones(3), kT), 1e-12));
}

TEST(Identification, FiniteDifferenceInitialState) {
  const Vec3 kstar = axis_lqr_gain(Axis::Lateral, Vec3(0.15, 0.3, 0.1), kT);
  const auto data = simulate_lateral(kstar, 0.0, 0.0, 0.0, 3.75, 40);
  IdentificationOptions opt;
  opt.initial_state = InitialState::FiniteDifference;
  const IdentifiedGain id = identify_gain(data, Axis::Lateral, opt);
  EXPECT_DOUBLE_EQ(id.x0(0), data[0]);
  EXPECT_NEAR(id.x0(1), (data[1] - data[0]) / kT, 1e-12);
  EXPECT_NEAR(id.x0(2), (data[2] - 2 * data[1] + data[0]) / (kT * kT), 1e-12);
  EXPECT_LT(id.rmse, 0.1);
  EXPECT_LT(spectral_radius(axis_closed_loop(Axis::Lateral, id.gain, kT)), 1.0);
}

TEST(Identification, RejectsShortInput) {
  EXPECT_THROW(identify_gain({1.0, 2.0, 3.0}, Axis::Lateral), std::invalid_argument);
}

TEST(Identification, WeightsStayInBounds) {
  // A step-like trajectory pushes the weights toward the bounds.
  std::vector<double> data(12, 3.75);
  data[0] = 0.0;
  const IdentifiedGain id = identify_gain(data, Axis::Lateral);
  for (int i = 0; i < 3; ++i) {
    EXPECT_GE(id.q(i), 1e-4 * (1 - 1e-9));
    EXPECT_LE(id.q(i), 1e4 * (1 + 1e-9));
  }
}

TEST(Clusters, NormalizePadsWithTerminalValues) {
  RawTrajectory a{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, {20, 21, 22, 23, 24, 25, 26, 27, 28, 29}};
  RawTrajectory b{{0, 0.5, 1, 1.5, 2, 2.5, 3}, {10, 11, 12, 13, 14, 15, 16}};
  const auto c = normalize_cluster(Maneuver::M1, {a, b}, kT);
  ASSERT_EQ(c.steps(), 10);
  EXPECT_EQ(c.trajectories[0], a);
  for (int j = 0; j < 7; ++j) {
    EXPECT_EQ(c.trajectories[1].y[j], b.y[j]);
    EXPECT_EQ(c.trajectories[1].vx[j], b.vx[j]);
  }
  for (int j = 7; j < 10; ++j) {
    EXPECT_EQ(c.trajectories[1].y[j], 3.0);
    EXPECT_EQ(c.trajectories[1].vx[j], 16.0);
  }
  EXPECT_NEAR(c.duration(), 10 * kT, 1e-12);
}

TEST(Clusters, NormalizeNoOpCases) {
  RawTrajectory a{{0, 1, 2, 3}, {5, 5, 5, 5}};
  EXPECT_EQ(normalize_cluster(Maneuver::M0, {a}, kT).trajectories[0], a);
  RawTrajectory b{{1, 1, 1, 1}, {6, 6, 6, 6}};
  const auto c = normalize_cluster(Maneuver::M0, {a, b}, kT);
  EXPECT_EQ(c.trajectories[0], a);
  EXPECT_EQ(c.trajectories[1], b);
}

TEST(Clusters, NormalizeErrors) {
  EXPECT_THROW(normalize_cluster(Maneuver::M0, {}, kT), std::invalid_argument);
  EXPECT_THROW(normalize_cluster(Maneuver::M0, {RawTrajectory{{1, 2}, {1}}}, kT),
               std::invalid_argument);
  EXPECT_THROW(normalize_cluster(Maneuver::M0, {RawTrajectory{}}, kT), std::invalid_argument);
}

TEST(Clusters, SyntheticLaneChangeEndsNearTargetLane) {
  const auto clusters = synthesize_clusters(2023, LaneGeometry{});
  ASSERT_EQ(clusters.size(), 7u);
  const auto& m1 = clusters[1];
  EXPECT_EQ(m1.maneuver, Maneuver::M1);
  EXPECT_GE(m1.raw.size(), 30u);
  for (const auto& tr : m1.raw) EXPECT_NEAR(tr.y.back(), 3.75, 0.3);
  for (const auto& tr : clusters[5].raw) EXPECT_NEAR(tr.y.back(), -3.75, 0.3);
}

TEST(Clusters, SyntheticLaneKeepStdRoughlyConstant) {
  const auto clusters = synthesize_clusters(2023, LaneGeometry{});
  const auto c = normalize_cluster(Maneuver::M0, clusters[0].raw, kT);
  const auto sd = lateral_step_std(c);
  double lo = 1e9, hi = 0.0, mean = 0.0;
  for (double s : sd) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    mean += s / double(sd.size());
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT((hi - lo) / mean, 0.5);
}

TEST(Clusters, SyntheticIsDeterministic) {
  const auto a = synthesize_clusters(11, LaneGeometry{});
  const auto b = synthesize_clusters(11, LaneGeometry{});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].raw, b[i].raw);
  const auto c = synthesize_clusters(12, LaneGeometry{});
  EXPECT_NE(a[1].raw, c[1].raw);
}

TEST(Clusters, CsvRoundTrip) {
  const auto clusters = synthesize_clusters(5, LaneGeometry{});
  const auto path = std::filesystem::temp_directory_path() / "isa_test_cluster.csv";
  write_cluster_csv(path, clusters[2].raw);
  EXPECT_EQ(read_cluster_csv(path), clusters[2].raw);
  std::filesystem::remove(path);
}

TEST(GainSet, CardinalityAndStability) {
  SynthesisOptions so;
  so.trajectories = 30;
  const auto clusters = synthesize_clusters(3, LaneGeometry{}, so);
  const auto cluster = normalize_cluster(Maneuver::M1, clusters[1].raw, kT);
  const GainSet set = build_gain_set(cluster);
  EXPECT_EQ(set.lon_gains.size(), 30u);
  EXPECT_EQ(set.lat_gains.size(), 30u);
  Vec2 mean_lon = Vec2::Zero();
  Vec3 mean_lat = Vec3::Zero();
  for (const auto& k : set.lat_gains) {
    EXPECT_LT(spectral_radius(axis_closed_loop(Axis::Lateral, k, kT)), 1.0);
    mean_lat += k / 30.0;
  }
  for (const auto& k : set.lon_gains) {
    EXPECT_LT(spectral_radius(axis_closed_loop(Axis::Longitudinal, k, kT)), 1.0);
    mean_lon += k / 30.0;
  }
  EXPECT_TRUE(set.mean_lat.isApprox(mean_lat, 1e-12));
  EXPECT_TRUE(set.mean_lon.isApprox(mean_lon, 1e-12));
}

TEST(GainSet, IdenticalTrajectoriesGiveEqualGains) {
  const Vec3 k = axis_lqr_gain(Axis::Lateral, Vec3(0.1, 0.2, 0.2), kT);
  RawTrajectory tr;
  tr.y = simulate_lateral(k, 0.0, 0.0, 0.0, 3.75, 30);
  tr.vx = simulate_speed(axis_lqr_gain(Axis::Longitudinal, Vec2(0.05, 0.1), kT), 20, 0, 22, 30);
  const auto cluster = normalize_cluster(Maneuver::M1, {tr, tr, tr}, kT);
  const GainSet set = build_gain_set(cluster);
  for (const auto& g : set.lat_gains) EXPECT_TRUE(g.isApprox(set.mean_lat, 1e-12));
  for (const auto& g : set.lon_gains) EXPECT_TRUE(g.isApprox(set.mean_lon, 1e-12));
}

TEST(GainSet, CacheRoundTrip) {
  const GainLibrary lib = identify_synthetic(4, LaneGeometry{}, kT, 6);
  const auto path = std::filesystem::temp_directory_path() / "isa_test_gains.json";
  const GainCacheMeta meta{kT, 4, 6, "synthetic"};
  save_gain_cache(path, lib, meta);
  const auto [back, m] = load_gain_cache(path);
  EXPECT_EQ(m, meta);
  for (Maneuver mv : kSvManeuvers) {
    ASSERT_TRUE(back.contains(mv));
    const auto& a = lib.at(mv);
    const auto& b = back.at(mv);
    ASSERT_EQ(a.lat_gains.size(), b.lat_gains.size());
    for (std::size_t i = 0; i < a.lat_gains.size(); ++i) {
      EXPECT_EQ(a.lat_gains[i], b.lat_gains[i]);
      EXPECT_EQ(a.lon_gains[i], b.lon_gains[i]);
    }
    EXPECT_EQ(a.lane_keep_sigma_y, b.lane_keep_sigma_y);
  }
  std::filesystem::remove(path);
}
