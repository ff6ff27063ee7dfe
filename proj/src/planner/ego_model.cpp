#include "isa/planner/ego_model.hpp"

namespace isa {

Vec8 ego_dynamics(const Vec8& xi, const Input& u, const EgoParams& p) {
  const double L = p.lf + p.lr;
  const double c = p.lr / L;
  const double v = xi(ego::V);
  Vec8 d;
  d(ego::X) = v;
  d(ego::Y) = v * xi(ego::PHI) + c * v * xi(ego::DELTA);
  d(ego::PHI) = v * xi(ego::DELTA) / L;
  d(ego::V) = xi(ego::A);
  d(ego::A) = xi(ego::ETA);
  d(ego::ETA) = u(0);
  d(ego::DELTA) = xi(ego::OMEGA);
  d(ego::OMEGA) = u(1);
  return d;
}

void ego_dynamics_jacobian(const Vec8& xi, const EgoParams& p, Mat8& fx, Mat82& fu) {
  const double L = p.lf + p.lr;
  const double c = p.lr / L;
  const double v = xi(ego::V);
  fx.setZero();
  fx(ego::X, ego::V) = 1.0;
  fx(ego::Y, ego::V) = xi(ego::PHI) + c * xi(ego::DELTA);
  fx(ego::Y, ego::PHI) = v;
  fx(ego::Y, ego::DELTA) = c * v;
  fx(ego::PHI, ego::V) = xi(ego::DELTA) / L;
  fx(ego::PHI, ego::DELTA) = v / L;
  fx(ego::V, ego::A) = 1.0;
  fx(ego::A, ego::ETA) = 1.0;
  fx(ego::DELTA, ego::OMEGA) = 1.0;
  fu.setZero();
  fu(ego::ETA, 0) = 1.0;
  fu(ego::OMEGA, 1) = 1.0;
}

Vec8 step_ego(const Vec8& xi, const Input& u, double T, const EgoParams& p) {
  const Vec8 k1 = ego_dynamics(xi, u, p);
  const Vec8 k2 = ego_dynamics(xi + 0.5 * T * k1, u, p);
  const Vec8 k3 = ego_dynamics(xi + 0.5 * T * k2, u, p);
  const Vec8 k4 = ego_dynamics(xi + T * k3, u, p);
  return xi + (T / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec8 step_ego(const Vec8& xi, const Input& u, double T, const EgoParams& p, Mat8& jx, Mat82& ju) {
  Mat8 fx;
  Mat82 fu;
  const Vec8 k1 = ego_dynamics(xi, u, p);
  ego_dynamics_jacobian(xi, p, fx, fu);
  const Mat8 dk1x = fx;
  const Mat82 dk1u = fu;

  const Vec8 x2 = xi + 0.5 * T * k1;
  const Vec8 k2 = ego_dynamics(x2, u, p);
  ego_dynamics_jacobian(x2, p, fx, fu);
  const Mat8 dk2x = fx * (Mat8::Identity() + 0.5 * T * dk1x);
  const Mat82 dk2u = fx * (0.5 * T * dk1u) + fu;

  const Vec8 x3 = xi + 0.5 * T * k2;
  const Vec8 k3 = ego_dynamics(x3, u, p);
  ego_dynamics_jacobian(x3, p, fx, fu);
  const Mat8 dk3x = fx * (Mat8::Identity() + 0.5 * T * dk2x);
  const Mat82 dk3u = fx * (0.5 * T * dk2u) + fu;

  const Vec8 x4 = xi + T * k3;
  const Vec8 k4 = ego_dynamics(x4, u, p);
  ego_dynamics_jacobian(x4, p, fx, fu);
  const Mat8 dk4x = fx * (Mat8::Identity() + T * dk3x);
  const Mat82 dk4u = fx * (T * dk3u) + fu;

  jx = Mat8::Identity() + (T / 6.0) * (dk1x + 2.0 * dk2x + 2.0 * dk3x + dk4x);
  ju = (T / 6.0) * (dk1u + 2.0 * dk2u + 2.0 * dk3u + dk4u);
  return xi + (T / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SvState ego_as_sv_state(const Vec8& xi, const EgoParams& p) {
  const double L = p.lf + p.lr;
  const double c = p.lr / L;
  const double v = xi(ego::V);
  const double heading = xi(ego::PHI) + c * xi(ego::DELTA);
  SvState s;
  s.x = xi(ego::X);
  s.vx = v;
  s.ax = xi(ego::A);
  s.y = xi(ego::Y);
  s.vy = v * heading;
  s.ay = xi(ego::A) * heading + v * (v * xi(ego::DELTA) / L + c * xi(ego::OMEGA));
  return s;
}

}  // namespace isa
