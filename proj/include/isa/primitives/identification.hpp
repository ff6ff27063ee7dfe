#pragma once

#include <Eigen/Dense>
#include <vector>

namespace isa {

enum class Axis { Lateral, Longitudinal };

/// How the unmeasured initial derivatives are obtained before the rollout.
///   JointLeastSquares: for each candidate gain the initial derivatives are
///     solved in closed form (they enter the rollout linearly), so noiseless
///     data generated by the model is reproduced exactly.
///   FiniteDifference: first-order differences of the leading samples.
enum class InitialState { JointLeastSquares, FiniteDifference };

struct IdentificationOptions {
  double T = 0.32;
  InitialState initial_state = InitialState::JointLeastSquares;
  double q_min = 1e-4;
  double q_max = 1e4;
  int max_evaluations = 4000;
};

struct IdentifiedGain {
  Eigen::VectorXd gain;  // 3 entries lateral, 2 longitudinal
  Eigen::VectorXd q;     // diagonal of the weighting matrix, R = 1
  Eigen::VectorXd x0;    // initial state used for the rollout
  double cost = 0.0;     // sum of squared tracking errors
  double rmse = 0.0;     // sqrt(cost / samples)
  bool warning = false;  // no improvement over the initial Q = I
};

/// Per-axis LQR gain from the diagonal weights (R = 1).
Eigen::VectorXd axis_lqr_gain(Axis axis, const Eigen::VectorXd& q, double T);

/// Closed-loop transition of the feedback-controlled axis states
/// ([y vy ay] lateral, [vx ax] longitudinal).
Eigen::MatrixXd axis_closed_loop(Axis axis, const Eigen::VectorXd& gain, double T);

/// Rollout of the measured channel (y, or vx) for samples.size() steps from
/// x0 toward the reference `target` (terminal value of the data).
std::vector<double> axis_rollout(Axis axis, const Eigen::VectorXd& gain, const Eigen::VectorXd& x0,
                                 double target, int samples, double T);

/// Identify the feedback gain of one normalized trajectory (lateral
/// positions or longitudinal speeds sampled at T). Requires >= 4 samples.
IdentifiedGain identify_gain(const std::vector<double>& samples, Axis axis,
                             const IdentificationOptions& options = {});

}  // namespace isa
