#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "isa/planner/ocp.hpp"
#include "isa/planner/qp.hpp"
#include "isa/planner/transcription.hpp"
#include "isa/uncertainty/quantify.hpp"

using namespace isa;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

OcpProblem cruise_problem(double v, double y) {
  OcpProblem p;
  p.xi0(ego::V) = v;
  p.xi0(ego::Y) = y;
  p.v_ref = v;
  p.y_ref = y;
  p.x_dv.assign(p.horizon, kInf);
  return p;
}

Eigen::VectorXd random_inputs_vector(const Transcription& tr, Rng& rng) {
  std::normal_distribution<double> n(0.0, 0.3);
  std::vector<Input> in(tr.problem().horizon);
  for (auto& u : in) u = Input(n(rng), 0.1 * n(rng));
  Eigen::VectorXd w = tr.from_inputs(in);
  // Perturb states and slacks so defects are nonzero.
  for (Eigen::Index i = 2 * tr.problem().horizon; i < w.size(); ++i) w(i) += 0.01 * n(rng);
  return w;
}

}  // namespace

TEST(Qp, UnconstrainedMinimizer) {
  QpProblem qp;
  qp.H = Eigen::Matrix2d{{4, 1}, {1, 3}};
  qp.g = Eigen::Vector2d(1, 2);
  qp.C.resize(0, 2);
  qp.d.resize(0);
  const auto r = solve_qp(qp);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((qp.H * r.z + qp.g).norm(), 1e-12);
}

TEST(Qp, ActiveHalfPlane) {
  // min 0.5|z|^2 - 2 z1 - 2 z2 s.t. z1 + z2 <= 1: projection onto the line.
  QpProblem qp;
  qp.H = Eigen::Matrix2d::Identity();
  qp.g = Eigen::Vector2d(-2, -2);
  qp.C = Eigen::RowVector2d(1, 1);
  qp.d = Eigen::VectorXd::Constant(1, 1.0);
  const auto r = solve_qp(qp);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.z(0), 0.5, 1e-8);
  EXPECT_NEAR(r.z(1), 0.5, 1e-8);
  EXPECT_NEAR(r.lambda(0), 1.5, 1e-7);
}

TEST(Qp, RandomProblemsSatisfyKkt) {
  Rng rng(31);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 3 + trial % 6;
    const int m = 2 + trial % 5;
    Eigen::MatrixXd A(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = n(rng);
    QpProblem qp;
    qp.H = A * A.transpose() + Eigen::MatrixXd::Identity(dim, dim);
    qp.g.resize(dim);
    for (int i = 0; i < dim; ++i) qp.g(i) = 3 * n(rng);
    qp.C.resize(m, dim);
    qp.d.resize(m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < dim; ++j) qp.C(i, j) = n(rng);
      qp.d(i) = std::abs(n(rng));  // z = 0 is feasible
    }
    const auto r = solve_qp(qp);
    ASSERT_TRUE(r.converged) << trial;
    const Eigen::VectorXd slack = qp.d - qp.C * r.z;
    EXPECT_LT((qp.H * r.z + qp.g + qp.C.transpose() * r.lambda).lpNorm<Eigen::Infinity>(), 1e-6);
    EXPECT_GT(slack.minCoeff(), -1e-8);
    EXPECT_GT(r.lambda.minCoeff(), -1e-10);
    EXPECT_LT(slack.cwiseProduct(r.lambda).lpNorm<Eigen::Infinity>(), 1e-6);
  }
}

TEST(Qp, DimensionMismatchThrows) {
  QpProblem qp;
  qp.H = Eigen::Matrix2d::Identity();
  qp.g = Eigen::Vector3d::Zero();
  EXPECT_THROW(solve_qp(qp), std::invalid_argument);
}

TEST(Transcription, RejectsWrongDvLength) {
  OcpProblem p = cruise_problem(20, 1.875);
  p.x_dv.resize(3);
  EXPECT_THROW(Transcription{p}, std::invalid_argument);
}

TEST(Transcription, GradientMatchesFiniteDifferences) {
  OcpProblem p = cruise_problem(20, 1.875);
  p.v_ref = 25;
  p.y_ref = 5.625;
  for (int t = 0; t < p.horizon; ++t) p.x_dv[t] = 40 + 15 * 0.32 * t;
  const Transcription tr(p);
  Rng rng(6);
  const Eigen::VectorXd w = random_inputs_vector(tr, rng);
  const Eigen::VectorXd g = tr.gradient(w);
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Eigen::VectorXd a = w, b = w;
    a(i) += h;
    b(i) -= h;
    const double fd = (tr.objective(a) - tr.objective(b)) / (2 * h);
    EXPECT_NEAR(g(i), fd, 1e-5 * (1.0 + std::abs(fd))) << "index " << i;
  }
}

TEST(Transcription, DefectJacobianMatchesFiniteDifferences) {
  const Transcription tr(cruise_problem(22, 5.625));
  Rng rng(7);
  const Eigen::VectorXd w = random_inputs_vector(tr, rng);
  const Eigen::MatrixXd J = tr.defect_jacobian(w);
  ASSERT_EQ(J.rows(), tr.defect_count());
  ASSERT_EQ(J.cols(), tr.size());
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    Eigen::VectorXd a = w, b = w;
    a(i) += h;
    b(i) -= h;
    const Eigen::VectorXd fd = (tr.defects(a) - tr.defects(b)) / (2 * h);
    EXPECT_LT((fd - J.col(i)).lpNorm<Eigen::Infinity>(), 1e-6) << "index " << i;
  }
}

TEST(Transcription, RolloutHasZeroDefects) {
  const Transcription tr(cruise_problem(22, 5.625));
  std::vector<Input> in(25, Input(0.2, -0.01));
  const Eigen::VectorXd w = tr.from_inputs(in);
  EXPECT_LT(tr.defects(w).lpNorm<Eigen::Infinity>(), 1e-12);
  EXPECT_LT((tr.inequalities(w) - (tr.inequality_matrix() * w - tr.inequality_offset())).norm(), 1e-12);
}

TEST(Ocp, CruiseAtTargetIsFree) {
  const auto r = solve_ocp(cruise_problem(25, 1.875));
  EXPECT_EQ(r.status, SolverStatus::Converged);
  EXPECT_LT(r.cost, 1e-8);
  for (const auto& u : r.inputs) EXPECT_LT(u.norm(), 1e-5);
  for (double rho : r.rho) EXPECT_NEAR(rho, 0.0, 1e-12);
  ASSERT_EQ(r.states.size(), 25u);
  EXPECT_NEAR(r.states.back()(ego::X), 25 * 25 * 0.32, 1e-6);
}

TEST(Ocp, StationaryObstacleSlowsDown) {
  OcpProblem p = cruise_problem(20, 1.875);
  p.x_dv.assign(p.horizon, 30.0);
  const auto r = solve_ocp(p);
  EXPECT_EQ(r.status, SolverStatus::Converged);
  ASSERT_EQ(r.states.size(), std::size_t(p.horizon));
  EXPECT_LT(r.states.back()(ego::V), 20.0);
  EXPECT_LT(r.max_defect, 1e-6);
  // Slack equals the least nonnegative value satisfying each headway row.
  const Transcription tr(p);
  const Eigen::VectorXd w = tr.from_inputs(r.inputs);
  for (int t = 1; t <= p.horizon; ++t) {
    const double excess = tr.headway_excess(w, t, false);
    EXPECT_NEAR(r.rho[t - 1], std::max(0.0, excess), 1e-9) << "t = " << t;
    EXPECT_GE(r.rho[t - 1], 0.0);
  }
  // Bounds hold on the re-simulated states.
  for (const auto& xi : r.states) {
    EXPECT_GE(xi(ego::V), p.speed_min - 1e-6);
    EXPECT_LE(std::abs(xi(ego::DELTA)), p.delta_max + 1e-6);
    EXPECT_GE(xi(ego::A), p.accel_min - 1e-6);
    EXPECT_LE(xi(ego::A), p.accel_max + 1e-6);
  }
}

TEST(Ocp, WarmStartReproducesCold) {
  OcpProblem p = cruise_problem(24, 1.875);
  p.v_ref = 28;
  p.y_ref = 5.625;
  for (int t = 0; t < p.horizon; ++t) p.x_dv[t] = 50 + 20 * 0.32 * (t + 1);
  const auto cold = solve_ocp(p);
  const auto warm = solve_ocp(p, cold.inputs);
  ASSERT_EQ(cold.status, SolverStatus::Converged);
  for (int t = 0; t < p.horizon; ++t) EXPECT_LT((cold.inputs[t] - warm.inputs[t]).norm(), 1e-4);
  EXPECT_LE(warm.iterations, cold.iterations);
  EXPECT_NEAR(warm.cost, cold.cost, 1e-6 * (1 + cold.cost));
}

TEST(Ocp, ShiftedInputsRepeatLast) {
  PlanResult r;
  for (int t = 0; t < 4; ++t) r.inputs.push_back(Input(t, -t));
  const auto s = shifted_inputs(r, 4);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0], Input(1, -1));
  EXPECT_EQ(s[2], Input(3, -3));
  EXPECT_EQ(s[3], Input(3, -3));
}

TEST(Ocp, RandomInstancesAreFeasible) {
  Rng rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    OcpProblem p = cruise_problem(15 + 15 * u(rng), 1.875 + 3.75 * int(3 * u(rng)));
    p.v_ref = 15 + 20 * u(rng);
    p.y_ref = 1.875 + 3.75 * int(3 * u(rng));
    const double gap = 20 + 60 * u(rng);
    const double v_dv = 10 + 20 * u(rng);
    for (int t = 0; t < p.horizon; ++t) p.x_dv[t] = gap + v_dv * 0.32 * (t + 1);
    const auto r = solve_ocp(p);
    EXPECT_LT(r.max_defect, 1e-6) << trial;
    EXPECT_LT(r.max_bound_violation, 1e-6) << trial;
    for (double rho : r.rho) EXPECT_GE(rho, 0.0);
  }
}
