#pragma once

#include <string_view>
#include <vector>

#include "isa/planner/transcription.hpp"

namespace isa {

enum class SolverStatus { Converged, Degraded };
std::string_view to_string(SolverStatus s);

struct PlanResult {
  std::vector<Input> inputs;  // u_k .. u_{k+N-1}
  std::vector<Vec8> states;   // xi_{k+1} .. xi_{k+N}, forward rollout of `inputs`
  std::vector<double> rho;    // per step, >= 0
  double cost = 0.0;
  SolverStatus status = SolverStatus::Degraded;
  int iterations = 0;
  double wall_time = 0.0;  // seconds
  double max_defect = 0.0;
  double max_bound_violation = 0.0;
};

struct SqpOptions {
  int max_iterations = 100;
  double step_tolerance = 1e-7;
  double defect_tolerance = 1e-9;
};

/// SQP on the multiple-shooting transcription: Gauss-Newton Hessian of the
/// quadratic cost, defects linearized through the RK4 Jacobians and
/// condensed onto the inputs, dense interior-point QP per iteration, L1
/// merit backtracking. `warm` is the initial input guess (zeros if empty).
/// Returned states are re-simulated from the inputs and the slack is the
/// least nonnegative value satisfying the headway constraint.
PlanResult solve_ocp(const OcpProblem& problem, const std::vector<Input>& warm = {},
                     const SqpOptions& options = {});

/// Previous solution shifted by one step, last input repeated.
std::vector<Input> shifted_inputs(const PlanResult& previous, int horizon);

}  // namespace isa
