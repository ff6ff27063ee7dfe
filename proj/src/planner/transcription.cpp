#include "isa/planner/transcription.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isa {

Transcription::Transcription(OcpProblem problem) : p_(std::move(problem)) {
  const int N = p_.horizon;
  if (N < 1) throw std::invalid_argument("Transcription: horizon must be >= 1");
  if (int(p_.x_dv.size()) != N) throw std::invalid_argument("Transcription: x_dv must have N entries");

  for (int t = 0; t < N; ++t) {
    terms_.push_back({input_index(t), p_.q1, 0.0});
    terms_.push_back({input_index(t) + 1, p_.q2, 0.0});
  }
  for (int t = 1; t <= N; ++t) {
    terms_.push_back({state_index(t) + ego::A, p_.q3, 0.0});
    terms_.push_back({state_index(t) + ego::DELTA, p_.q4, 0.0});
    terms_.push_back({slack_index(t), p_.q6, 0.0});
  }
  terms_.push_back({state_index(N) + ego::Y, p_.q5_y, p_.y_ref});
  terms_.push_back({state_index(N) + ego::V, p_.q5_v, p_.v_ref});

  std::vector<std::pair<Eigen::VectorXd, double>> rows;
  auto unit = [&](int index, double coef) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(size());
    r(index) = coef;
    return r;
  };
  for (int t = 1; t <= N; ++t) {
    const int s = state_index(t);
    rows.emplace_back(unit(s + ego::DELTA, 1.0), p_.delta_max);
    rows.emplace_back(unit(s + ego::DELTA, -1.0), p_.delta_max);
    rows.emplace_back(unit(s + ego::A, 1.0), p_.accel_max);
    rows.emplace_back(unit(s + ego::A, -1.0), -p_.accel_min);
    rows.emplace_back(unit(s + ego::V, -1.0), -p_.speed_min);
    if (std::isfinite(p_.x_dv[t - 1])) {
      Eigen::VectorXd r = unit(s + ego::V, p_.tau_h);
      r(s + ego::X) = 1.0;
      r(slack_index(t)) = -1.0;
      rows.emplace_back(std::move(r), p_.x_dv[t - 1] - 0.5 * p_.vehicle_length);
    }
    rows.emplace_back(unit(slack_index(t), -1.0), 0.0);
  }
  G_.resize(Eigen::Index(rows.size()), size());
  h_.resize(Eigen::Index(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    G_.row(Eigen::Index(i)) = rows[i].first.transpose();
    h_(Eigen::Index(i)) = rows[i].second;
  }
}

double Transcription::objective(const Eigen::VectorXd& w) const {
  double f = 0.0;
  for (const auto& c : terms_) {
    const double e = w(c.index) - c.target;
    f += c.weight * e * e;
  }
  return f;
}

Eigen::VectorXd Transcription::gradient(const Eigen::VectorXd& w) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(size());
  for (const auto& c : terms_) g(c.index) += 2.0 * c.weight * (w(c.index) - c.target);
  return g;
}

Vec8 Transcription::state(const Eigen::VectorXd& w, int t) const {
  if (t == 0) return p_.xi0;
  return w.segment<8>(state_index(t));
}

Eigen::VectorXd Transcription::defects(const Eigen::VectorXd& w) const {
  Eigen::VectorXd c(defect_count());
  for (int t = 0; t < p_.horizon; ++t) {
    const Input u = w.segment<2>(input_index(t));
    c.segment<8>(8 * t) = step_ego(state(w, t), u, p_.T, p_.ego) - state(w, t + 1);
  }
  return c;
}

Eigen::MatrixXd Transcription::defect_jacobian(const Eigen::VectorXd& w) const {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(defect_count(), size());
  Mat8 jx;
  Mat82 ju;
  for (int t = 0; t < p_.horizon; ++t) {
    const Input u = w.segment<2>(input_index(t));
    step_ego(state(w, t), u, p_.T, p_.ego, jx, ju);
    J.block<8, 2>(8 * t, input_index(t)) = ju;
    if (t > 0) J.block<8, 8>(8 * t, state_index(t)) = jx;
    J.block<8, 8>(8 * t, state_index(t + 1)) = -Mat8::Identity();
  }
  return J;
}

Eigen::VectorXd Transcription::inequalities(const Eigen::VectorXd& w) const { return G_ * w - h_; }

double Transcription::headway_excess(const Eigen::VectorXd& w, int t, bool with_slack) const {
  const double dv = p_.x_dv[t - 1];
  if (!std::isfinite(dv)) return 0.0;
  const Vec8 xi = state(w, t);
  const double rho = with_slack ? w(slack_index(t)) : 0.0;
  return xi(ego::V) * p_.tau_h - rho - (dv - xi(ego::X) - 0.5 * p_.vehicle_length);
}

Eigen::VectorXd Transcription::from_inputs(const std::vector<Input>& inputs) const {
  if (int(inputs.size()) != p_.horizon) throw std::invalid_argument("from_inputs: need N inputs");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(size());
  Vec8 xi = p_.xi0;
  for (int t = 0; t < p_.horizon; ++t) {
    w.segment<2>(input_index(t)) = inputs[t];
    xi = step_ego(xi, inputs[t], p_.T, p_.ego);
    w.segment<8>(state_index(t + 1)) = xi;
  }
  for (int t = 1; t <= p_.horizon; ++t) {
    w(slack_index(t)) = std::max(0.0, headway_excess(w, t, false));
  }
  return w;
}

std::vector<Input> Transcription::inputs(const Eigen::VectorXd& w) const {
  std::vector<Input> u(p_.horizon);
  for (int t = 0; t < p_.horizon; ++t) u[t] = w.segment<2>(input_index(t));
  return u;
}

}  // namespace isa
