#include "isa/planner/qp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isa {

namespace {
// Largest step in (0, 1] keeping v + a dv > 0 componentwise.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
  }
  return a;
}
}  // namespace

QpResult solve_qp(const QpProblem& qp, const QpOptions& opt) {
  const Eigen::Index n = qp.H.rows();
  const Eigen::Index m = qp.C.rows();
  if (qp.H.cols() != n || qp.g.size() != n || (m > 0 && qp.C.cols() != n) || qp.d.size() != m) {
    throw std::invalid_argument("solve_qp: inconsistent dimensions");
  }
  QpResult res;
  if (m == 0) {
    res.z = qp.H.ldlt().solve(-qp.g);
    res.converged = true;
    return res;
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = (qp.d - qp.C * z).cwiseMax(1.0);
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(m);
  const double scale = 1.0 + std::max(qp.g.lpNorm<Eigen::Infinity>(), qp.d.lpNorm<Eigen::Infinity>());

  Eigen::MatrixXd K(n, n);
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::VectorXd r_d = qp.H * z + qp.g + qp.C.transpose() * lam;
    const Eigen::VectorXd r_p = qp.C * z + s - qp.d;
    const double mu = s.dot(lam) / double(m);
    res.iterations = it;
    if (r_d.lpNorm<Eigen::Infinity>() <= opt.tolerance * scale &&
        r_p.lpNorm<Eigen::Infinity>() <= opt.tolerance * scale && mu <= opt.tolerance * 1e-2) {
      res.converged = true;
      break;
    }

    const Eigen::VectorXd D = lam.cwiseQuotient(s);
    K = qp.H;
    K.noalias() += qp.C.transpose() * D.asDiagonal() * qp.C;
    const Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) break;

    // Newton direction for complementarity target r_c = s.*lam - sigma mu.
    auto direction = [&](const Eigen::VectorXd& r_c, Eigen::VectorXd& dz, Eigen::VectorXd& ds,
                         Eigen::VectorXd& dl) {
      const Eigen::VectorXd t = r_p - r_c.cwiseQuotient(lam);
      dz = llt.solve(-r_d - qp.C.transpose() * (D.cwiseProduct(t)));
      dl = D.cwiseProduct(qp.C * dz + t);
      ds = -(r_c + s.cwiseProduct(dl)).cwiseQuotient(lam);
    };

    Eigen::VectorXd dz, ds, dl;
    const Eigen::VectorXd sl = s.cwiseProduct(lam);
    direction(sl, dz, ds, dl);
    const double a_aff = std::min(max_step(s, ds), max_step(lam, dl));
    const double mu_aff = (s + a_aff * ds).dot(lam + a_aff * dl) / double(m);
    const double sigma = std::pow(mu_aff / mu, 3);

    const Eigen::VectorXd r_c =
        sl + ds.cwiseProduct(dl) - Eigen::VectorXd::Constant(m, sigma * mu);
    direction(r_c, dz, ds, dl);
    const double a = std::min(1.0, 0.995 * std::min(max_step(s, ds), max_step(lam, dl)));
    z += a * dz;
    s += a * ds;
    lam += a * dl;
    res.iterations = it + 1;
  }
  res.z = z;
  res.lambda = lam;
  return res;
}

}  // namespace isa
