#include "isa/predictor/mode_filter.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace isa {

ModeFilter::ModeFilter(const SvState& initial, const Vec6& process_std, const Vec3m& measurement_std)
    : x_(to_vector(initial)) {
  Q_ = process_std.array().square().matrix().asDiagonal();
  R_ = measurement_std.array().square().matrix().asDiagonal();
  P_ = Q_;
}

Eigen::Matrix<double, 3, 6> ModeFilter::observation() {
  Eigen::Matrix<double, 3, 6> H = Eigen::Matrix<double, 3, 6>::Zero();
  H(0, 0) = 1.0;
  H(1, 1) = 1.0;
  H(2, 3) = 1.0;
  return H;
}

double ModeFilter::step(const PrimitiveModel& model, const Vec3m& z) {
  const Mat6 Phi = model.closed_loop();
  const Vec2 feed(model.k_lon(0) * model.v_ref, model.k_lat(0) * model.y_ref);
  const Vec6 x_pred = Phi * x_ + model.B * feed;
  const Mat6 P_pred = Phi * P_ * Phi.transpose() + Q_;

  const auto H = observation();
  const Vec3m nu = z - H * x_pred;
  Mat3m S = H * P_pred * H.transpose() + R_;
  S = 0.5 * (S + S.transpose());
  const Eigen::LLT<Mat3m> llt(S);
  if (llt.info() != Eigen::Success) throw std::runtime_error("ModeFilter: innovation covariance not SPD");
  const Eigen::Matrix<double, 6, 3> G = llt.solve(H * P_pred).transpose();  // P H' S^-1
  x_ = x_pred + G * nu;
  // Joseph form keeps P symmetric positive definite.
  const Mat6 IKH = Mat6::Identity() - G * H;
  P_ = IKH * P_pred * IKH.transpose() + G * R_ * G.transpose();
  P_ = 0.5 * (P_ + P_.transpose());

  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double maha = nu.dot(llt.solve(nu));
  return -0.5 * (maha + logdet + 3.0 * std::log(2.0 * std::numbers::pi));
}

std::vector<double> mode_probabilities(const std::vector<double>& log_likelihoods,
                                       const std::vector<double>& costs, double varsigma) {
  if (log_likelihoods.size() != costs.size()) {
    throw std::invalid_argument("mode_probabilities: size mismatch");
  }
  const std::size_t n = costs.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  bool any_finite = false;
  for (double l : log_likelihoods) any_finite = any_finite || std::isfinite(l);

  std::vector<double> logw(n);
  double max_logw = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double cost_term = -0.5 * std::log(std::max(costs[i], 0.0) + varsigma);
    const double lik = any_finite ? log_likelihoods[i] : 0.0;
    logw[i] = std::isfinite(lik) ? lik + cost_term : -std::numeric_limits<double>::infinity();
    max_logw = std::max(max_logw, logw[i]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(logw[i] - max_logw);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

}  // namespace isa
