#pragma once

#include <Eigen/Dense>

namespace isa {

/// min 0.5 z'Hz + g'z  subject to  C z <= d, with H positive definite.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::MatrixXd C;
  Eigen::VectorXd d;
};

struct QpOptions {
  int max_iterations = 100;
  double tolerance = 1e-10;
};

struct QpResult {
  Eigen::VectorXd z;
  Eigen::VectorXd lambda;  // inequality multipliers
  bool converged = false;
  int iterations = 0;
};

/// Dense primal-dual interior point with Mehrotra predictor-corrector steps.
QpResult solve_qp(const QpProblem& qp, const QpOptions& options = {});

}  // namespace isa
