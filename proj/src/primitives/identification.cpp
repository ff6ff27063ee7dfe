#include "isa/primitives/identification.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/LevenbergMarquardt>

#include "isa/primitives/lqr.hpp"
#include "isa/primitives/primitive_model.hpp"

namespace isa {

namespace {

struct AxisSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
};

AxisSystem axis_system(Axis axis, double T) {
  if (axis == Axis::Lateral) {
    const auto lat = lateral_axis(T);
    return {lat.A, lat.B};
  }
  // Longitudinal feedback acts on [vx ax]; position only integrates.
  Eigen::MatrixXd A(2, 2);
  A << 1.0, T, 0.0, 1.0;
  Eigen::VectorXd B(2);
  B << 0.5 * T * T, T;
  return {A, B};
}

// Rows H * Phi^j for j = 0..samples-1.
Eigen::MatrixXd observation_rows(const Eigen::MatrixXd& Phi, int samples) {
  const Eigen::Index n = Phi.rows();
  Eigen::MatrixXd rows(samples, n);
  Eigen::RowVectorXd h = Eigen::RowVectorXd::Zero(n);
  h(0) = 1.0;
  for (int j = 0; j < samples; ++j) {
    rows.row(j) = h;
    h = h * Phi;
  }
  return rows;
}

struct Fit {
  Eigen::VectorXd x0;
  Eigen::VectorXd residual;
};

Fit fit_trajectory(Axis axis, const Eigen::VectorXd& gain, const std::vector<double>& data,
                   const IdentificationOptions& opt) {
  const int n_s = static_cast<int>(data.size());
  const double target = data.back();
  const Eigen::MatrixXd Phi = axis_closed_loop(axis, gain, opt.T);
  const Eigen::MatrixXd O = observation_rows(Phi, n_s);
  const Eigen::Index n = Phi.rows();

  Eigen::VectorXd e0(n);
  e0(0) = data[0] - target;
  if (opt.initial_state == InitialState::JointLeastSquares) {
    Eigen::VectorXd rhs(n_s);
    for (int j = 0; j < n_s; ++j) rhs(j) = data[j] - target - O(j, 0) * e0(0);
    const Eigen::MatrixXd M = O.rightCols(n - 1);
    e0.tail(n - 1) = M.completeOrthogonalDecomposition().solve(rhs);
  } else {
    const double T = opt.T;
    e0(1) = (data[1] - data[0]) / T;
    if (n == 3) e0(2) = (data[2] - 2.0 * data[1] + data[0]) / (T * T);
  }
  Fit fit;
  fit.residual = O * e0;
  for (int j = 0; j < n_s; ++j) fit.residual(j) -= data[j] - target;
  fit.x0 = e0;
  fit.x0(0) = data[0];
  return fit;
}

struct Bounds {
  double mid;
  double half;
  Eigen::VectorXd to_q(const Eigen::VectorXd& theta) const {
    return (mid + half * theta.array().tanh()).exp().matrix();
  }
};

struct TrackingResidual : Eigen::DenseFunctor<double> {
  TrackingResidual(Axis axis, const std::vector<double>& data, const IdentificationOptions& opt,
                   Bounds bounds, int dim)
      : Eigen::DenseFunctor<double>(dim, static_cast<int>(data.size())),
        axis(axis),
        data(data),
        opt(opt),
        bounds(bounds) {}

  int operator()(const InputType& theta, ValueType& f) const {
    const Eigen::VectorXd gain = axis_lqr_gain(axis, bounds.to_q(theta), opt.T);
    f = fit_trajectory(axis, gain, data, opt).residual;
    return 0;
  }

  // Central differences with a fixed absolute step in the bounded parameter.
  int df(const InputType& theta, JacobianType& jac) const {
    constexpr double h = 1e-6;
    jac.resize(values(), inputs());
    ValueType fp(values()), fm(values());
    for (int j = 0; j < inputs(); ++j) {
      InputType tp = theta, tm = theta;
      tp(j) += h;
      tm(j) -= h;
      (*this)(tp, fp);
      (*this)(tm, fm);
      jac.col(j) = (fp - fm) / (2.0 * h);
    }
    return 0;
  }

  Axis axis;
  const std::vector<double>& data;
  const IdentificationOptions& opt;
  Bounds bounds;
};

}  // namespace

Eigen::VectorXd axis_lqr_gain(Axis axis, const Eigen::VectorXd& q, double T) {
  const AxisSystem sys = axis_system(axis, T);
  if (q.size() != sys.A.rows()) throw std::invalid_argument("axis_lqr_gain: wrong weight count");
  const Eigen::MatrixXd K =
      dlqr(sys.A, sys.B, q.asDiagonal().toDenseMatrix(), Eigen::MatrixXd::Identity(1, 1));
  return K.row(0).transpose();
}

Eigen::MatrixXd axis_closed_loop(Axis axis, const Eigen::VectorXd& gain, double T) {
  const AxisSystem sys = axis_system(axis, T);
  return sys.A - sys.B * gain.transpose();
}

std::vector<double> axis_rollout(Axis axis, const Eigen::VectorXd& gain, const Eigen::VectorXd& x0,
                                 double target, int samples, double T) {
  const Eigen::MatrixXd Phi = axis_closed_loop(axis, gain, T);
  Eigen::VectorXd e = x0;
  e(0) -= target;
  std::vector<double> out;
  out.reserve(samples);
  for (int j = 0; j < samples; ++j) {
    out.push_back(e(0) + target);
    e = Phi * e;
  }
  return out;
}

IdentifiedGain identify_gain(const std::vector<double>& samples, Axis axis,
                             const IdentificationOptions& opt) {
  if (samples.size() < 4) throw std::invalid_argument("identify_gain: need at least 4 samples");
  if (!(opt.q_min > 0.0) || !(opt.q_max > opt.q_min)) {
    throw std::invalid_argument("identify_gain: need 0 < q_min < q_max");
  }
  for (double v : samples) {
    if (!std::isfinite(v)) throw std::invalid_argument("identify_gain: non-finite sample");
  }
  const int dim = axis == Axis::Lateral ? 3 : 2;
  const Bounds bounds{0.5 * (std::log(opt.q_min) + std::log(opt.q_max)),
                      0.5 * (std::log(opt.q_max) - std::log(opt.q_min))};
  // Start from Q = I (clamped into the bounds).
  const double start = std::clamp(-bounds.mid / bounds.half, -0.999999, 0.999999);
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(dim, std::abs(start) < 1e-12 ? 0.0 : std::atanh(start));

  TrackingResidual functor(axis, samples, opt, bounds, dim);
  Eigen::VectorXd f0(samples.size());
  functor(theta, f0);
  const double cost0 = f0.squaredNorm();

  auto result = [&](const Eigen::VectorXd& th, bool warning) {
    IdentifiedGain out;
    out.q = bounds.to_q(th);
    out.gain = axis_lqr_gain(axis, out.q, opt.T);
    const Fit fit = fit_trajectory(axis, out.gain, samples, opt);
    out.x0 = fit.x0;
    out.cost = fit.residual.squaredNorm();
    out.rmse = std::sqrt(out.cost / static_cast<double>(samples.size()));
    out.warning = warning;
    return out;
  };

  // Zero-error data: every Q fits, keep the initial one.
  if (cost0 <= 1e-24) return result(theta, false);

  const Eigen::VectorXd theta0 = theta;
  Eigen::LevenbergMarquardt<TrackingResidual> lm(functor);
  lm.setMaxfev(opt.max_evaluations);
  lm.setFtol(1e-14);
  lm.setXtol(1e-12);
  lm.minimize(theta);

  if (!theta.allFinite()) return result(theta0, true);
  Eigen::VectorXd f(samples.size());
  functor(theta, f);
  if (!(f.squaredNorm() < cost0)) return result(theta0, true);
  return result(theta, false);
}

}  // namespace isa
