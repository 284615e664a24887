// Copyright 2026 The catchmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CATCHMPC_SOLVER_HPP_
#define CATCHMPC_SOLVER_HPP_

#include <functional>
#include <string>
#include <utility>

#include "catchmpc/types.hpp"

namespace catchmpc {

/// Bound-constrained NLP with nonlinear equality constraints:
///
///   min f(x)  s.t.  c(x) = 0,  lower <= x <= upper
///
/// Callbacks must be pure for fixed inputs (the solver relies on
/// re-evaluation determinism).
struct NlpSpec {
  int dim = 0;
  int eq_dim = 0;
  /// Returns f(x); when grad is non-null, fills it with the gradient.
  std::function<double(const VecX& x, VecX* grad)> objective;
  /// Fills c(x). May be empty when eq_dim == 0.
  std::function<void(const VecX& x, VecX& c)> equality;
  /// Accumulates J_c(x)^T v into grad (Jacobian-vector callback).
  std::function<void(const VecX& x, const VecX& v, VecX& grad)> equality_vjp;
  VecX lower, upper;
};

enum class SolveStatus { converged, max_iter, infeasible_stationary };

const char* to_string(SolveStatus status);

struct SolverOptions {
  double tol_kkt = 1e-6;
  double tol_eq = 1e-6;
  int max_outer = 20;
  int max_inner = 200;       // inner iterations per outer loop
  double rho0 = 10.0;        // initial equality penalty
  double rho_scale = 10.0;   // penalty escalation factor
  double eq_improve = 0.25;  // required violation decrease per outer loop
  double rho_max = 1e12;
  int lbfgs_memory = 10;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  int max_line_search = 40;
  /// Optional per-accepted-iterate observer (testing hook; determinism
  /// checks record the iterate stream through this).
  std::function<void(const VecX&)> iterate_observer;
  /// Optional hook invoked at the start of every outer iteration with the
  /// current iterate; the OCP layer refreshes frozen adaptive stage weights
  /// here.
  std::function<void(const VecX&)> outer_begin;
};

struct SolveReport {
  SolveStatus status = SolveStatus::max_iter;
  int outer_iterations = 0;
  int inner_iterations = 0;
  double objective = 0.0;
  double max_violation = 0.0;  // ||c(x)||_inf
  double kkt_residual = 0.0;   // projected-gradient norm of the Lagrangian
  double wall_time_s = 0.0;
};

/// Augmented-Lagrangian outer loop (multiplier update lambda += rho*c,
/// penalty escalation x rho_scale when the violation decrease stalls)
/// around a projected limited-memory quasi-Newton descent with backtracking
/// line search. x_init is clamped into the bounds. Deterministic: identical
/// spec + init + options give a bitwise-identical iterate sequence.
std::pair<VecX, SolveReport> solve(const NlpSpec& spec, VecX x_init,
                                   const SolverOptions& opts);

/// Receding-horizon warm start: drop the first input, duplicate the last.
/// Columns are time steps.
MatX warm_start_shift(const MatX& prev_u);

}  // namespace catchmpc

#endif  // CATCHMPC_SOLVER_HPP_
