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

#ifndef CATCHMPC_OCP_HPP_
#define CATCHMPC_OCP_HPP_

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "catchmpc/kinematics.hpp"
#include "catchmpc/solver.hpp"
#include "catchmpc/targeting.hpp"
#include "catchmpc/types.hpp"

namespace catchmpc {

enum class PlannerMode { pt, at };

const char* to_string(PlannerMode mode);

/// Cost weights for both formulations. R penalizes accelerations, W joint
/// velocities (both diagonal, entered as 14-vectors). The pt_terminal pair
/// is used in PT mode; the at_* ranges drive the adaptive law in AT mode.
struct PlannerWeights {
  Vec14 R = Vec14::Constant(1e-3);
  Vec14 W = Vec14::Constant(1e-2);

  struct PtTerminal {
    double P_e = 500.0;
    double O_e = 10.0;
  } pt_terminal;

  struct AtTerminal {
    double P_e_max = 50.0, P_e_min = 20.0;
    double O_e_max = 10.0, O_e_min = 2.0;
  } at_terminal;

  struct AtStage {
    double Q_pos_max = 2.0, Q_pos_min = 0.1;
    double Q_ori_max = 1.0, Q_ori_min = 0.1;
  } at_stage;

  double eps_pos = 0.05;  // m, position sensitivity of the adaptive law
  double eps_ori = 0.1;   // rad, orientation sensitivity

  void validate() const;
};

/// Built-in weight presets differentiating the planner modes. Known names:
/// pt, at_aggressive, at_balanced, at_smooth.
struct PlannerProfile {
  std::string name;
  PlannerMode mode;
  PlannerWeights weights;
};
PlannerProfile planner_profile(const std::string& name);
const std::vector<std::string>& planner_profile_names();

/// One finite-horizon planning instance.
struct OcpProblem {
  const SystemModel* model = nullptr;
  SystemState z0;
  TargetPose target;
  int horizon = 20;  // N
  double ts = 0.04;  // s
  PlannerWeights weights;
  PlannerMode mode = PlannerMode::pt;

  void validate() const;
};

/// Exact discrete double-integrator recursion:
///   q(k+1)  = q(k) + ts*qd(k) + ts^2/2 * u(k)
///   qd(k+1) = qd(k) + ts*u(k)
/// u is 14xN (columns are steps); q and qdot come back as 14x(N+1).
void rollout(const SystemState& z0, const MatX& u, double ts, MatX& q,
             MatX& qdot);

/// W(e) = W_min + (W_max - W_min) * e / (e + eps). Monotone in e, exactly
/// W_min at e = 0, and the range midpoint at e = eps.
double adaptive_weight(double e, double w_min, double w_max, double eps);

/// Per-step adaptive stage weights, evaluated from the predicted error of
/// the rollout induced by u (k = 0..N-1).
struct StageWeights {
  VecX q_pos, q_ori;
};
StageWeights compute_stage_weights(const OcpProblem& problem, const MatX& u);

/// Terminal weights for the cycle. AT mode applies the adaptive law to the
/// cycle-initial error e(0) (catcher pose at z0 vs target); PT returns the
/// fixed pair. Returns (P_e, O_e).
std::pair<double, double> resolve_terminal_weights(const OcpProblem& problem);

struct CostBreakdown {
  double terminal_pos = 0.0;
  double terminal_ori = 0.0;
  double stage_pos = 0.0;
  double stage_ori = 0.0;
  double running_accel = 0.0;
  double running_vel = 0.0;
  double state_penalty = 0.0;  // soft q/qd bound penalty (NLP objective only)

  /// Mode cost, penalty excluded.
  double cost_total() const {
    return terminal_pos + terminal_ori + stage_pos + stage_ori +
           running_accel + running_vel;
  }
};

/// PT cost (fixed terminal weights, no stage pose terms). Catcher pose is
/// computed through the left arm; the chain constraint ties the right arm.
/// When grad is non-null it receives d cost / d u (14xN).
double cost_pt(const OcpProblem& problem, const MatX& u, MatX* grad = nullptr,
               CostBreakdown* breakdown = nullptr);

/// AT cost: terminal weights resolved once from e(0), stage weights from the
/// predicted error at each step of the rollout induced by u. The gradient
/// treats the weights as frozen at the evaluation point (they are
/// re-evaluated per solver outer iteration, not differentiated through).
double cost_at(const OcpProblem& problem, const MatX& u, MatX* grad = nullptr,
               CostBreakdown* breakdown = nullptr);

/// Shared evaluator with explicitly pinned weights; cost_pt/cost_at are thin
/// wrappers. stage may be null (no stage pose terms). penalty_weight adds
/// the soft state-bound penalty over steps 1..N.
double cost_with_weights(const OcpProblem& problem, const MatX& u, double p_e,
                         double o_e, const StageWeights* stage,
                         double penalty_weight, MatX* grad = nullptr,
                         CostBreakdown* breakdown = nullptr);

/// Per-entry feasibility slacks (>= 0 inside bounds) and closed-chain
/// residuals along the rollout induced by u.
struct ConstraintEval {
  MatX q_slack_lower, q_slack_upper;    // 14xN, steps 1..N
  MatX qd_slack_lower, qd_slack_upper;  // 14xN, steps 1..N
  MatX u_slack_lower, u_slack_upper;    // 14xN, steps 0..N-1
  MatX chain;                           // 7xN, steps 1..N

  double max_bound_violation() const;
  double max_chain_residual() const;
};
ConstraintEval constraint_eval(const OcpProblem& problem, const MatX& u);

/// NLP view of an OcpProblem: decision variables are the stacked u columns
/// (single shooting; the linear rollout eliminates the states), bounds are
/// the acceleration limits, equalities are the chain residuals at steps
/// 1..N. Holds the evaluation workspace; not copyable.
class OcpNlp {
 public:
  OcpNlp(const OcpProblem& problem, double state_bound_weight);
  OcpNlp(const OcpNlp&) = delete;
  OcpNlp& operator=(const OcpNlp&) = delete;

  const NlpSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }

  /// Freeze the adaptive stage weights at x (no-op in PT mode). The solver
  /// calls this at every outer iteration through SolverOptions::outer_begin.
  void refresh_stage_weights(const VecX& x);

  std::pair<double, double> terminal_weights() const {
    return {p_e_, o_e_};
  }
  const StageWeights& frozen_stage_weights() const { return stage_; }

  MatX unflatten(const VecX& x) const;
  static VecX flatten(const MatX& u);

 private:
  struct Workspace;
  double objective(const VecX& x, VecX* grad);
  void equality(const VecX& x, VecX& c);
  void equality_vjp(const VecX& x, const VecX& v, VecX& grad);
  void sync(const VecX& x);

  OcpProblem problem_;
  double penalty_weight_;
  double p_e_ = 0.0, o_e_ = 0.0;
  StageWeights stage_;
  std::unique_ptr<Workspace> ws_;
  NlpSpec spec_;
};

/// Solver diagnostics and the rolled-out plan.
struct Plan {
  MatX u;           // 14xN accelerations [rad/s^2]
  MatX q, qdot;     // 14x(N+1) rollout
  double cost = 0.0;  // mode cost at the solution (penalty excluded)
  CostBreakdown breakdown;
  SolveReport report;
  double resolved_P_e = 0.0, resolved_O_e = 0.0;
  double max_chain_residual = 0.0;
  double max_bound_violation = 0.0;
};

struct OcpSolveOptions {
  SolverOptions solver;
  double state_bound_weight = 1e3;
  double state_bound_tol = 1e-3;  // rad / rad/s, realized-state tolerance
  int penalty_retries = 2;        // escalation re-solves when states violate
  double penalty_scale = 10.0;
};

/// Assemble, solve (with state-penalty escalation re-solves when needed)
/// and roll out the plan. u_init may be empty (cold start from zeros).
Plan solve_ocp(const OcpProblem& problem, const MatX& u_init,
               const OcpSolveOptions& opts);

}  // namespace catchmpc

#endif  // CATCHMPC_OCP_HPP_
