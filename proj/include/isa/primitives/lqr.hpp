#pragma once

#include <Eigen/Dense>

namespace isa {

/// Stabilizing solution P of the discrete algebraic Riccati equation
///   P = A'PA - A'PB (R + B'PB)^-1 B'PA + Q
/// computed with the structure-preserving doubling iteration.
/// Throws std::runtime_error if the iteration does not converge.
Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

/// Infinite-horizon discrete LQR gain K (u = -K x).
Eigen::MatrixXd dlqr(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Q,
                     const Eigen::MatrixXd& R);

}  // namespace isa
