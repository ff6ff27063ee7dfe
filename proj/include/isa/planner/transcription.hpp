#pragma once

#include <vector>

#include <Eigen/Dense>

#include "isa/planner/ego_model.hpp"

namespace isa {

/// Data of one receding-horizon problem.
struct OcpProblem {
  Vec8 xi0 = Vec8::Zero();
  EgoParams ego;
  int horizon = 25;
  double T = 0.32;
  double v_ref = 0.0;
  double y_ref = 0.0;
  std::vector<double> x_dv;  // per step t = 1..N, +inf when no DV

  double q1 = 0.5, q2 = 0.1, q3 = 0.5, q4 = 0.1;
  double q5_y = 0.05, q5_v = 1.0;
  double q6 = 0.055;
  double delta_max = 0.8;
  double accel_min = -6.0, accel_max = 6.0;
  double speed_min = 0.0;
  double tau_h = 2.0;
  double vehicle_length = 4.3;
};

/// Multiple-shooting transcription. Decision vector
///   w = [u_0 .. u_{N-1} (2 each), xi_1 .. xi_N (8 each), rho_1 .. rho_N].
/// Equality constraints are the RK4 defects F(xi_t, u_t) - xi_{t+1};
/// inequalities are collected as g(w) <= 0.
class Transcription {
 public:
  explicit Transcription(OcpProblem problem);

  const OcpProblem& problem() const { return p_; }
  int size() const { return 11 * p_.horizon; }
  int defect_count() const { return 8 * p_.horizon; }
  int inequality_count() const { return int(h_.size()); }

  int input_index(int t) const { return 2 * t; }               // t = 0..N-1
  int state_index(int t) const { return 2 * p_.horizon + 8 * (t - 1); }  // t = 1..N
  int slack_index(int t) const { return 10 * p_.horizon + (t - 1); }     // t = 1..N

  double objective(const Eigen::VectorXd& w) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& w) const;
  Eigen::VectorXd defects(const Eigen::VectorXd& w) const;
  Eigen::MatrixXd defect_jacobian(const Eigen::VectorXd& w) const;

  /// Inequalities are affine: g(w) = G w - h.
  Eigen::VectorXd inequalities(const Eigen::VectorXd& w) const;
  const Eigen::MatrixXd& inequality_matrix() const { return G_; }
  const Eigen::VectorXd& inequality_offset() const { return h_; }

  /// Decision vector from inputs: states by forward rollout, slack set to
  /// the smallest nonnegative value satisfying the headway rows.
  Eigen::VectorXd from_inputs(const std::vector<Input>& inputs) const;
  std::vector<Input> inputs(const Eigen::VectorXd& w) const;
  Vec8 state(const Eigen::VectorXd& w, int t) const;  // t = 0..N

  /// Quadratic cost terms: weight * (w[index] - target)^2.
  struct CostTerm {
    int index;
    double weight;
    double target;
  };
  const std::vector<CostTerm>& cost_terms() const { return terms_; }

  /// Headway residual v tau - rho - (x_dv - x - l/2) per step, 0 when no DV.
  double headway_excess(const Eigen::VectorXd& w, int t, bool with_slack) const;

 private:
  OcpProblem p_;
  std::vector<CostTerm> terms_;
  Eigen::MatrixXd G_;
  Eigen::VectorXd h_;
};

}  // namespace isa
