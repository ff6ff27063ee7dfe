#include "isa/primitives/primitive_model.hpp"

#include <Eigen/Eigenvalues>

namespace isa {

namespace {
Mat3 integrator(double T) {
  Mat3 A;
  A << 1.0, T, 0.5 * T * T, 0.0, 1.0, T, 0.0, 0.0, 1.0;
  return A;
}
}  // namespace

AxisMatrices longitudinal_axis(double T) {
  return {integrator(T), Vec3(0.0, 0.5 * T * T, T)};
}

AxisMatrices lateral_axis(double T) {
  return {integrator(T), Vec3(T * T * T / 6.0, 0.5 * T * T, T)};
}

PrimitiveModel PrimitiveModel::make(double T, Vec2 k_lon, Vec3 k_lat, double v_ref, double y_ref) {
  PrimitiveModel m;
  const auto lon = longitudinal_axis(T);
  const auto lat = lateral_axis(T);
  m.A.setZero();
  m.A.topLeftCorner<3, 3>() = lon.A;
  m.A.bottomRightCorner<3, 3>() = lat.A;
  m.B.setZero();
  m.B.block<3, 1>(0, 0) = lon.B;
  m.B.block<3, 1>(3, 1) = lat.B;
  m.k_lon = k_lon;
  m.k_lat = k_lat;
  m.v_ref = v_ref;
  m.y_ref = y_ref;
  return m;
}

Mat6 PrimitiveModel::closed_loop() const {
  Eigen::Matrix<double, 2, 6> K = Eigen::Matrix<double, 2, 6>::Zero();
  K(0, 1) = k_lon(0);
  K(0, 2) = k_lon(1);
  K(1, 3) = k_lat(0);
  K(1, 4) = k_lat(1);
  K(1, 5) = k_lat(2);
  return A - B * K;
}

Vec6 to_vector(const SvState& s) {
  Vec6 v;
  v << s.x, s.vx, s.ax, s.y, s.vy, s.ay;
  return v;
}

SvState from_vector(const Vec6& v) { return {v(0), v(1), v(2), v(3), v(4), v(5)}; }

SvState step_primitive(const SvState& s, const PrimitiveModel& m) {
  const double u_lon = -(m.k_lon(0) * (s.vx - m.v_ref) + m.k_lon(1) * s.ax);
  const double u_lat = -(m.k_lat(0) * (s.y - m.y_ref) + m.k_lat(1) * s.vy + m.k_lat(2) * s.ay);
  const Vec6 next = m.A * to_vector(s) + m.B * Vec2(u_lon, u_lat);
  return from_vector(next);
}

Rollout rollout_positions(SvState state, const PrimitiveModel& model, int steps) {
  Rollout r;
  r.x.reserve(steps);
  r.y.reserve(steps);
  for (int t = 0; t < steps; ++t) {
    state = step_primitive(state, model);
    r.x.push_back(state.x);
    r.y.push_back(state.y);
  }
  return r;
}

double spectral_radius(const Eigen::MatrixXd& M) {
  return M.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace isa
