#pragma once

#include <Eigen/Dense>
#include <vector>

#include "isa/primitives/primitive_model.hpp"

namespace isa {

using Vec3m = Eigen::Vector3d;  // measurement [x vx y]
using Mat3m = Eigen::Matrix3d;

/// Linear Kalman filter on the closed-loop primitive model of one maneuver.
/// The transition uses the references set for the previous step.
class ModeFilter {
 public:
  ModeFilter() = default;
  ModeFilter(const SvState& initial, const Vec6& process_std, const Vec3m& measurement_std);

  /// Predict with `model` (gains and references of the previous step), then
  /// update with the measurement. Returns the log-likelihood of the
  /// innovation.
  double step(const PrimitiveModel& model, const Vec3m& measurement);

  const Vec6& mean() const { return x_; }
  const Mat6& covariance() const { return P_; }

  static Eigen::Matrix<double, 3, 6> observation();

 private:
  Vec6 x_ = Vec6::Zero();
  Mat6 P_ = Mat6::Identity();
  Mat6 Q_ = Mat6::Identity();
  Mat3m R_ = Mat3m::Identity();
};

/// Normalized weights proportional to L_m / sqrt(J_m + varsigma), computed
/// in the log domain. Falls back to the cost-only weights when no
/// log-likelihood is finite.
std::vector<double> mode_probabilities(const std::vector<double>& log_likelihoods,
                                       const std::vector<double>& costs, double varsigma);

}  // namespace isa
