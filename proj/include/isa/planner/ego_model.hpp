#pragma once

#include <Eigen/Dense>

#include "isa/world/lanes.hpp"

namespace isa {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Mat82 = Eigen::Matrix<double, 8, 2>;
using Input = Eigen::Vector2d;  // (snap s, steering angular acceleration alpha)

/// Index of each component of the EV state xi.
namespace ego {
enum : int { X = 0, Y, PHI, V, A, ETA, DELTA, OMEGA };
}

struct EgoParams {
  double lf = 1.477;
  double lr = 1.446;
};

/// Continuous-time kinematic model:
///   x' = v, y' = v phi + lr/(lf+lr) v delta, phi' = v delta/(lf+lr),
///   v' = a, a' = eta, eta' = s, delta' = omega, omega' = alpha.
Vec8 ego_dynamics(const Vec8& xi, const Input& u, const EgoParams& p);
void ego_dynamics_jacobian(const Vec8& xi, const EgoParams& p, Mat8& fx, Mat82& fu);

/// One RK4 step of length T with the input held constant.
Vec8 step_ego(const Vec8& xi, const Input& u, double T, const EgoParams& p);

/// RK4 step and its exact derivatives with respect to xi and u.
Vec8 step_ego(const Vec8& xi, const Input& u, double T, const EgoParams& p, Mat8& jx, Mat82& ju);

/// Ground-frame view used by the linear feedback model of the moving-target
/// computation: speed v along x, lateral rate from the kinematic model.
SvState ego_as_sv_state(const Vec8& xi, const EgoParams& p);

}  // namespace isa
