#include "isa/planner/ocp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "isa/planner/qp.hpp"

namespace isa {

std::string_view to_string(SolverStatus s) {
  return s == SolverStatus::Converged ? "converged" : "degraded";
}

namespace {

double violation(const Transcription& tr, const Eigen::VectorXd& w) {
  return tr.defects(w).lpNorm<1>() + tr.inequalities(w).cwiseMax(0.0).sum();
}

// Affine map w_new = a + M z from the QP variables z = [du (2N), rho (N)]
// obtained by condensing the linearized defects.
struct Condensed {
  Eigen::VectorXd a;
  Eigen::MatrixXd M;
};

Condensed condense(const Transcription& tr, const Eigen::VectorXd& w) {
  const auto& p = tr.problem();
  const int N = p.horizon;
  const int nz = 3 * N;
  Condensed c;
  c.a = Eigen::VectorXd::Zero(tr.size());
  c.M = Eigen::MatrixXd::Zero(tr.size(), nz);

  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(8, 2 * N);  // d xi_t / d du
  Vec8 e = Vec8::Zero();                                // offset of d xi_t
  Mat8 jx;
  Mat82 ju;
  for (int t = 0; t < N; ++t) {
    const int iu = tr.input_index(t);
    c.a.segment<2>(iu) = w.segment<2>(iu);
    c.M.block<2, 2>(iu, iu) = Eigen::Matrix2d::Identity();

    const Vec8 xi = tr.state(w, t);
    const Vec8 next = step_ego(xi, w.segment<2>(iu), p.T, p.ego, jx, ju);
    const Vec8 defect = next - tr.state(w, t + 1);
    Eigen::MatrixXd E_next = jx * E;
    E_next.middleCols<2>(iu) += ju;
    e = jx * e + defect;
    E = std::move(E_next);

    const int is = tr.state_index(t + 1);
    c.a.segment<8>(is) = tr.state(w, t + 1) + e;
    c.M.block(is, 0, 8, 2 * N) = E;
  }
  for (int t = 1; t <= N; ++t) c.M(tr.slack_index(t), 2 * N + t - 1) = 1.0;
  return c;
}

}  // namespace

PlanResult solve_ocp(const OcpProblem& problem, const std::vector<Input>& warm,
                     const SqpOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const Transcription tr(problem);
  const int N = problem.horizon;

  std::vector<Input> guess = warm;
  if (int(guess.size()) != N) guess.assign(N, Input::Zero());
  Eigen::VectorXd w = tr.from_inputs(guess);

  const Eigen::MatrixXd& G = tr.inequality_matrix();
  const Eigen::VectorXd& h = tr.inequality_offset();
  double mu = 10.0;
  bool converged = false;
  int iterations = 0;

  for (int it = 0; it < opt.max_iterations; ++it) {
    iterations = it + 1;
    const Condensed c = condense(tr, w);

    QpProblem qp;
    const int nz = int(c.M.cols());
    qp.H = Eigen::MatrixXd::Zero(nz, nz);
    qp.g = Eigen::VectorXd::Zero(nz);
    for (const auto& term : tr.cost_terms()) {
      const Eigen::RowVectorXd row = c.M.row(term.index);
      qp.H.noalias() += (2.0 * term.weight) * row.transpose() * row;
      qp.g += (2.0 * term.weight * (c.a(term.index) - term.target)) * row.transpose();
    }
    qp.C = G * c.M;
    qp.d = h - G * c.a;
    const QpResult sol = solve_qp(qp);

    const Eigen::VectorXd step = c.a + c.M * sol.z - w;
    const Eigen::VectorXd grad = tr.gradient(w);
    const double lam_max = sol.lambda.size() ? sol.lambda.lpNorm<Eigen::Infinity>() : 0.0;
    mu = std::max(mu, 10.0 * (1.0 + lam_max + grad.lpNorm<Eigen::Infinity>()));

    const double viol0 = violation(tr, w);
    const double merit0 = tr.objective(w) + mu * viol0;
    const double slope = grad.dot(step) - mu * viol0;
    double alpha = 1.0;
    Eigen::VectorXd trial = w + step;
    if (slope < -1e-14) {
      for (int ls = 0; ls < 30; ++ls) {
        trial = w + alpha * step;
        if (tr.objective(trial) + mu * violation(tr, trial) <= merit0 + 1e-4 * alpha * slope) break;
        alpha *= 0.5;
      }
    }
    w = trial;

    const double step_norm = alpha * step.lpNorm<Eigen::Infinity>();
    const double defect = tr.defects(w).lpNorm<Eigen::Infinity>();
    if (step_norm <= opt.step_tolerance && defect <= opt.defect_tolerance) {
      converged = true;
      break;
    }
  }

  // Report the re-simulated trajectory so dynamics hold exactly.
  const Eigen::VectorXd final_w = tr.from_inputs(tr.inputs(w));
  PlanResult r;
  r.inputs = tr.inputs(final_w);
  for (int t = 1; t <= N; ++t) {
    r.states.push_back(tr.state(final_w, t));
    r.rho.push_back(final_w(tr.slack_index(t)));
  }
  r.cost = tr.objective(final_w);
  r.iterations = iterations;
  r.max_defect = tr.defects(final_w).lpNorm<Eigen::Infinity>();
  r.max_bound_violation = std::max(0.0, tr.inequalities(final_w).maxCoeff());
  r.status = converged && r.max_bound_violation <= 1e-6 ? SolverStatus::Converged
                                                        : SolverStatus::Degraded;
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<Input> shifted_inputs(const PlanResult& previous, int horizon) {
  std::vector<Input> u;
  if (previous.inputs.empty()) return u;
  for (std::size_t t = 1; t < previous.inputs.size(); ++t) u.push_back(previous.inputs[t]);
  while (int(u.size()) < horizon) u.push_back(previous.inputs.back());
  u.resize(horizon);
  return u;
}

}  // namespace isa
