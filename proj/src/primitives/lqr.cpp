#include "isa/primitives/lqr.hpp"

#include <stdexcept>

namespace isa {

Eigen::MatrixXd solve_dare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n || R.rows() != B.cols() ||
      R.cols() != B.cols()) {
    throw std::invalid_argument("solve_dare: dimension mismatch");
  }
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd Ak = A;
  Eigen::MatrixXd Gk = B * R.ldlt().solve(B.transpose());
  Eigen::MatrixXd Hk = Q;
  for (int it = 0; it < 100; ++it) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> W(I + Gk * Hk);
    const Eigen::MatrixXd V1 = W.solve(Ak);
    const Eigen::MatrixXd V2 = W.solve(Gk);
    const Eigen::MatrixXd G_next = Gk + Ak * V2 * Ak.transpose();
    const Eigen::MatrixXd H_next = Hk + V1.transpose() * Hk * Ak;
    const Eigen::MatrixXd A_next = Ak * V1;
    const double change = (H_next - Hk).norm();
    Ak = A_next;
    Gk = 0.5 * (G_next + G_next.transpose());
    Hk = 0.5 * (H_next + H_next.transpose());
    if (change <= 1e-14 * std::max(1.0, Hk.norm())) return Hk;
  }
  throw std::runtime_error("solve_dare: doubling iteration did not converge");
}

Eigen::MatrixXd dlqr(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& Q,
                     const Eigen::MatrixXd& R) {
  const Eigen::MatrixXd P = solve_dare(A, B, Q, R);
  const Eigen::MatrixXd S = R + B.transpose() * P * B;
  return S.ldlt().solve(B.transpose() * P * A);
}

}  // namespace isa
