#pragma once

#include <Eigen/Dense>

#include "isa/world/lanes.hpp"

namespace isa {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat62 = Eigen::Matrix<double, 6, 2>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Per-axis triple-integrator blocks of the motion-primitive model.
struct AxisMatrices {
  Mat3 A;
  Vec3 B;
};

AxisMatrices longitudinal_axis(double T);  // A_x, B_x (input acts on speed)
AxisMatrices lateral_axis(double T);       // A_y, B_y (input acts on position too)

/// Stacked state [x vx ax y vy ay] with per-axis state-feedback laws
///   u_lon = -K_lon [vx - v_ref, ax],  u_lat = -K_lat [y - y_ref, vy, ay].
struct PrimitiveModel {
  Mat6 A;
  Mat62 B;
  double v_ref = 0.0;
  double y_ref = 0.0;
  Vec2 k_lon = Vec2::Zero();
  Vec3 k_lat = Vec3::Zero();

  static PrimitiveModel make(double T, Vec2 k_lon, Vec3 k_lat, double v_ref, double y_ref);

  /// Closed-loop 6x6 transition matrix (the affine part is the reference term).
  Mat6 closed_loop() const;
};

Vec6 to_vector(const SvState& s);
SvState from_vector(const Vec6& v);

SvState step_primitive(const SvState& state, const PrimitiveModel& model);

/// Positions (x, y) for t = 1..steps.
struct Rollout {
  std::vector<double> x;
  std::vector<double> y;
};
Rollout rollout_positions(SvState state, const PrimitiveModel& model, int steps);

double spectral_radius(const Eigen::MatrixXd& M);

}  // namespace isa
