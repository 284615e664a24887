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

#include "catchmpc/ocp.hpp"

#include <cmath>
#include <stdexcept>

namespace catchmpc {

const char* to_string(PlannerMode mode) {
  return mode == PlannerMode::pt ? "pt" : "at";
}

void PlannerWeights::validate() const {
  if (!R.allFinite() || !W.allFinite() || (R.array() < 0).any() ||
      (W.array() < 0).any()) {
    throw std::invalid_argument("PlannerWeights: R, W must be finite and >= 0");
  }
  if (at_terminal.P_e_min > at_terminal.P_e_max ||
      at_terminal.O_e_min > at_terminal.O_e_max ||
      at_stage.Q_pos_min > at_stage.Q_pos_max ||
      at_stage.Q_ori_min > at_stage.Q_ori_max) {
    throw std::invalid_argument("PlannerWeights: adaptive mins must be <= maxes");
  }
  if (!(eps_pos > 0.0) || !(eps_ori > 0.0)) {
    throw std::invalid_argument("PlannerWeights: eps must be > 0");
  }
}

PlannerProfile planner_profile(const std::string& name) {
  PlannerProfile p;
  p.name = name;
  if (name == "pt") {
    p.mode = PlannerMode::pt;
    p.weights.pt_terminal = {500.0, 10.0};
    return p;
  }
  p.mode = PlannerMode::at;
  if (name == "at_aggressive") {
    p.weights.at_terminal = {500.0, 100.0, 10.0, 2.0};
  } else if (name == "at_balanced") {
    p.weights.at_terminal = {50.0, 20.0, 10.0, 2.0};
  } else if (name == "at_smooth") {
    p.weights.at_terminal = {0.001, 0.0, 0.001, 0.0};
  } else {
    throw std::invalid_argument("unknown planner profile '" + name + "'");
  }
  // All AT variants share the same stage ranges.
  p.weights.at_stage = {2.0, 0.1, 1.0, 0.1};
  return p;
}

const std::vector<std::string>& planner_profile_names() {
  static const std::vector<std::string> names = {"pt", "at_aggressive",
                                                 "at_balanced", "at_smooth"};
  return names;
}

void OcpProblem::validate() const {
  if (model == nullptr) throw std::invalid_argument("OcpProblem: model is null");
  if (horizon < 2) throw std::invalid_argument("OcpProblem: horizon must be >= 2");
  if (!(ts > 0.0)) throw std::invalid_argument("OcpProblem: ts must be > 0");
  if (!z0.q.allFinite() || !z0.qdot.allFinite()) {
    throw std::invalid_argument("OcpProblem: z0 must be finite");
  }
  weights.validate();
}

void rollout(const SystemState& z0, const MatX& u, double ts, MatX& q,
             MatX& qdot) {
  const Eigen::Index n = u.cols();
  if (u.rows() != kSystemDof) {
    throw std::invalid_argument("rollout: u must have 14 rows");
  }
  q.resize(kSystemDof, n + 1);
  qdot.resize(kSystemDof, n + 1);
  q.col(0) = z0.q;
  qdot.col(0) = z0.qdot;
  const double half_ts2 = 0.5 * ts * ts;
  for (Eigen::Index k = 0; k < n; ++k) {
    q.col(k + 1) = q.col(k) + ts * qdot.col(k) + half_ts2 * u.col(k);
    qdot.col(k + 1) = qdot.col(k) + ts * u.col(k);
  }
}

double adaptive_weight(double e, double w_min, double w_max, double eps) {
  return w_min + (w_max - w_min) * (e / (e + eps));
}

namespace {

// Shared evaluation state for one (problem, u) pair: rollout plus catcher
// kinematics through both arms at every step.
struct Eval {
  const OcpProblem& p;
  int n;
  MatX u;
  MatX q, qd;
  std::vector<CatcherKinematics> left;   // steps 0..N
  std::vector<CatcherKinematics> right;  // steps 1..N ([0] unused)
  std::vector<double> sign;              // hemisphere sign per step 1..N
  Vec14 q_min, q_max, qd_max;

  explicit Eval(const OcpProblem& problem) : p(problem), n(problem.horizon) {
    left.resize(n + 1);
    right.resize(n + 1);
    sign.assign(n + 1, 1.0);
    q_min << p.model->left.q_min, p.model->right.q_min;
    q_max << p.model->left.q_max, p.model->right.q_max;
    qd_max << p.model->left.qd_max, p.model->right.qd_max;
  }

  void compute(const MatX& u_in) {
    u = u_in;
    rollout(p.z0, u, p.ts, q, qd);
    for (int k = 0; k <= n; ++k) {
      left[k] = catcher_pose_and_jacobian(*p.model, q.col(k).head<kArmDof>(),
                                          ArmSide::left);
      if (k >= 1) {
        right[k] = catcher_pose_and_jacobian(
            *p.model, q.col(k).tail<kArmDof>(), ArmSide::right);
        sign[k] = left[k].pose.phi.dot(right[k].pose.phi) >= 0.0 ? 1.0 : -1.0;
      }
    }
  }

  // Soft quadratic hinge on q and qd bounds at step k; accumulates value
  // into bd and, when lam_q/lam_qd given, the derivative w.r.t. z(k).
  void penalty_step(int k, double w, CostBreakdown& bd, Vec14* lam_q,
                    Vec14* lam_qd) const {
    if (w == 0.0) return;
    for (int j = 0; j < kSystemDof; ++j) {
      const double up = q(j, k) - q_max(j);
      const double lo = q_min(j) - q(j, k);
      if (up > 0.0) {
        bd.state_penalty += w * up * up;
        if (lam_q) (*lam_q)(j) += 2.0 * w * up;
      }
      if (lo > 0.0) {
        bd.state_penalty += w * lo * lo;
        if (lam_q) (*lam_q)(j) -= 2.0 * w * lo;
      }
      const double vu = qd(j, k) - qd_max(j);
      const double vl = -qd_max(j) - qd(j, k);
      if (vu > 0.0) {
        bd.state_penalty += w * vu * vu;
        if (lam_qd) (*lam_qd)(j) += 2.0 * w * vu;
      }
      if (vl > 0.0) {
        bd.state_penalty += w * vl * vl;
        if (lam_qd) (*lam_qd)(j) -= 2.0 * w * vl;
      }
    }
  }

  double cost(double p_e, double o_e, const StageWeights* stage,
              double penalty_weight, MatX* grad, CostBreakdown* breakdown) {
    CostBreakdown bd;
    Vec14 lam_q = Vec14::Zero(), lam_qd = Vec14::Zero();
    const bool want_grad = grad != nullptr;
    if (want_grad) grad->setZero(kSystemDof, n);

    // Terminal pose error through the left arm at step N.
    {
      const CatcherKinematics& kin = left[n];
      const Vec3 ep = kin.pose.p - p.target.pose.p;
      const Vec4 rphi = quat_cost_residual(kin.pose.phi, p.target.pose.phi);
      bd.terminal_pos = p_e * ep.squaredNorm();
      bd.terminal_ori = o_e * rphi.squaredNorm();
      if (want_grad) {
        lam_q.head<kArmDof>() =
            2.0 * p_e * (kin.jacobian.topRows<3>().transpose() * ep) +
            2.0 * o_e * (kin.jacobian.bottomRows<4>().transpose() * rphi);
      }
    }
    penalty_step(n, penalty_weight, bd, want_grad ? &lam_q : nullptr,
                 want_grad ? &lam_qd : nullptr);

    const double half_ts2 = 0.5 * p.ts * p.ts;
    for (int k = n - 1; k >= 0; --k) {
      if (want_grad) {
        grad->col(k) = 2.0 * p.weights.R.cwiseProduct(u.col(k)) +
                       half_ts2 * lam_q + p.ts * lam_qd;
        lam_qd = p.ts * lam_q + lam_qd +
                 2.0 * p.weights.W.cwiseProduct(qd.col(k));
      }
      bd.running_accel += u.col(k).dot(p.weights.R.cwiseProduct(u.col(k)));
      bd.running_vel += qd.col(k).dot(p.weights.W.cwiseProduct(qd.col(k)));

      if (stage != nullptr &&
          (stage->q_pos(k) != 0.0 || stage->q_ori(k) != 0.0)) {
        const CatcherKinematics& kin = left[k];
        const Vec3 ep = kin.pose.p - p.target.pose.p;
        const Vec4 rphi = quat_cost_residual(kin.pose.phi, p.target.pose.phi);
        bd.stage_pos += stage->q_pos(k) * ep.squaredNorm();
        bd.stage_ori += stage->q_ori(k) * rphi.squaredNorm();
        if (want_grad) {
          lam_q.head<kArmDof>() +=
              2.0 * stage->q_pos(k) *
                  (kin.jacobian.topRows<3>().transpose() * ep) +
              2.0 * stage->q_ori(k) *
                  (kin.jacobian.bottomRows<4>().transpose() * rphi);
        }
      }
      if (k >= 1) {
        penalty_step(k, penalty_weight, bd, want_grad ? &lam_q : nullptr,
                     want_grad ? &lam_qd : nullptr);
      }
    }
    if (breakdown) *breakdown = bd;
    return bd.cost_total() + bd.state_penalty;
  }

  void residuals(VecX& c) const {
    c.resize(7 * n);
    for (int k = 1; k <= n; ++k) {
      auto block = c.segment<7>(7 * (k - 1));
      block.head<3>() = left[k].pose.p - right[k].pose.p;
      block.tail<4>() =
          left[k].pose.phi.wxyz() - sign[k] * right[k].pose.phi.wxyz();
    }
  }

  // grad += J_c(u)^T v via the same rollout adjoint as the cost.
  void residual_vjp(const VecX& v, Eigen::Ref<MatX> grad) const {
    Vec14 lam_q = Vec14::Zero(), lam_qd = Vec14::Zero();
    const double half_ts2 = 0.5 * p.ts * p.ts;

    auto contribution = [&](int k) -> Vec14 {
      const auto vk = v.segment<7>(7 * (k - 1));
      Vec14 out;
      out.head<kArmDof>() = left[k].jacobian.transpose() * vk;
      out.tail<kArmDof>() =
          -(right[k].jacobian.topRows<3>().transpose() * vk.head<3>() +
            sign[k] * (right[k].jacobian.bottomRows<4>().transpose() *
                       vk.tail<4>()));
      return out;
    };

    lam_q = contribution(n);
    for (int k = n - 1; k >= 0; --k) {
      grad.col(k) += half_ts2 * lam_q + p.ts * lam_qd;
      lam_qd = p.ts * lam_q + lam_qd;
      if (k >= 1) lam_q += contribution(k);
    }
  }
};

StageWeights zero_stage_weights(int n) {
  StageWeights sw;
  sw.q_pos = VecX::Zero(n);
  sw.q_ori = VecX::Zero(n);
  return sw;
}

StageWeights stage_weights_from_eval(const Eval& ev) {
  const OcpProblem& p = ev.p;
  StageWeights sw = zero_stage_weights(ev.n);
  if (p.mode != PlannerMode::at) return sw;
  for (int k = 0; k < ev.n; ++k) {
    const double e_pos = (ev.left[k].pose.p - p.target.pose.p).norm();
    const double e_ori = quat_angle_error(ev.left[k].pose.phi, p.target.pose.phi);
    sw.q_pos(k) = adaptive_weight(e_pos, p.weights.at_stage.Q_pos_min,
                                  p.weights.at_stage.Q_pos_max, p.weights.eps_pos);
    sw.q_ori(k) = adaptive_weight(e_ori, p.weights.at_stage.Q_ori_min,
                                  p.weights.at_stage.Q_ori_max, p.weights.eps_ori);
  }
  return sw;
}

}  // namespace

StageWeights compute_stage_weights(const OcpProblem& problem, const MatX& u) {
  Eval ev(problem);
  ev.compute(u);
  return stage_weights_from_eval(ev);
}

std::pair<double, double> resolve_terminal_weights(const OcpProblem& problem) {
  const PlannerWeights& w = problem.weights;
  if (problem.mode == PlannerMode::pt) {
    return {w.pt_terminal.P_e, w.pt_terminal.O_e};
  }
  const Pose pose0 =
      fk_catcher(*problem.model, problem.z0.q.head<kArmDof>(), ArmSide::left);
  const double e_pos = (pose0.p - problem.target.pose.p).norm();
  const double e_ori = quat_angle_error(pose0.phi, problem.target.pose.phi);
  return {adaptive_weight(e_pos, w.at_terminal.P_e_min, w.at_terminal.P_e_max,
                          w.eps_pos),
          adaptive_weight(e_ori, w.at_terminal.O_e_min, w.at_terminal.O_e_max,
                          w.eps_ori)};
}

double cost_with_weights(const OcpProblem& problem, const MatX& u, double p_e,
                         double o_e, const StageWeights* stage,
                         double penalty_weight, MatX* grad,
                         CostBreakdown* breakdown) {
  Eval ev(problem);
  ev.compute(u);
  return ev.cost(p_e, o_e, stage, penalty_weight, grad, breakdown);
}

double cost_pt(const OcpProblem& problem, const MatX& u, MatX* grad,
               CostBreakdown* breakdown) {
  const auto [p_e, o_e] = resolve_terminal_weights(problem);
  return cost_with_weights(problem, u, p_e, o_e, nullptr, 0.0, grad, breakdown);
}

double cost_at(const OcpProblem& problem, const MatX& u, MatX* grad,
               CostBreakdown* breakdown) {
  const StageWeights sw = compute_stage_weights(problem, u);
  const auto [p_e, o_e] = resolve_terminal_weights(problem);
  return cost_with_weights(problem, u, p_e, o_e, &sw, 0.0, grad, breakdown);
}

double ConstraintEval::max_bound_violation() const {
  double v = 0.0;
  for (const MatX* m : {&q_slack_lower, &q_slack_upper, &qd_slack_lower,
                        &qd_slack_upper, &u_slack_lower, &u_slack_upper}) {
    if (m->size() > 0) v = std::max(v, std::max(0.0, -m->minCoeff()));
  }
  return v;
}

double ConstraintEval::max_chain_residual() const {
  return chain.size() > 0 ? chain.cwiseAbs().maxCoeff() : 0.0;
}

ConstraintEval constraint_eval(const OcpProblem& problem, const MatX& u) {
  const int n = problem.horizon;
  MatX q, qd;
  rollout(problem.z0, u, problem.ts, q, qd);

  Vec14 q_min, q_max, qd_max, u_max;
  q_min << problem.model->left.q_min, problem.model->right.q_min;
  q_max << problem.model->left.q_max, problem.model->right.q_max;
  qd_max << problem.model->left.qd_max, problem.model->right.qd_max;
  u_max << problem.model->left.qdd_max, problem.model->right.qdd_max;

  ConstraintEval out;
  out.q_slack_lower.resize(kSystemDof, n);
  out.q_slack_upper.resize(kSystemDof, n);
  out.qd_slack_lower.resize(kSystemDof, n);
  out.qd_slack_upper.resize(kSystemDof, n);
  out.u_slack_lower.resize(kSystemDof, n);
  out.u_slack_upper.resize(kSystemDof, n);
  out.chain.resize(7, n);

  for (int k = 1; k <= n; ++k) {
    out.q_slack_lower.col(k - 1) = q.col(k) - q_min;
    out.q_slack_upper.col(k - 1) = q_max - q.col(k);
    out.qd_slack_lower.col(k - 1) = qd.col(k) + qd_max;
    out.qd_slack_upper.col(k - 1) = qd_max - qd.col(k);
    out.chain.col(k - 1) = chain_residual(
        *problem.model, q.col(k).head<kArmDof>(), q.col(k).tail<kArmDof>());
  }
  for (int k = 0; k < n; ++k) {
    out.u_slack_lower.col(k) = u.col(k) + u_max;
    out.u_slack_upper.col(k) = u_max - u.col(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// OcpNlp

struct OcpNlp::Workspace {
  Eval eval;
  VecX x_cached;
  bool valid = false;

  explicit Workspace(const OcpProblem& p) : eval(p) {}
};

OcpNlp::OcpNlp(const OcpProblem& problem, double state_bound_weight)
    : problem_(problem), penalty_weight_(state_bound_weight) {
  problem_.validate();
  const int n = problem_.horizon;
  std::tie(p_e_, o_e_) = resolve_terminal_weights(problem_);
  stage_ = zero_stage_weights(n);
  ws_ = std::make_unique<Workspace>(problem_);

  spec_.dim = kSystemDof * n;
  spec_.eq_dim = 7 * n;
  Vec14 u_max;
  u_max << problem_.model->left.qdd_max, problem_.model->right.qdd_max;
  spec_.lower.resize(spec_.dim);
  spec_.upper.resize(spec_.dim);
  for (int k = 0; k < n; ++k) {
    spec_.lower.segment<kSystemDof>(kSystemDof * k) = -u_max;
    spec_.upper.segment<kSystemDof>(kSystemDof * k) = u_max;
  }
  spec_.objective = [this](const VecX& x, VecX* grad) {
    return objective(x, grad);
  };
  spec_.equality = [this](const VecX& x, VecX& c) { equality(x, c); };
  spec_.equality_vjp = [this](const VecX& x, const VecX& v, VecX& grad) {
    equality_vjp(x, v, grad);
  };
}

VecX OcpNlp::flatten(const MatX& u) {
  return Eigen::Map<const VecX>(u.data(), u.size());
}

MatX OcpNlp::unflatten(const VecX& x) const {
  return Eigen::Map<const MatX>(x.data(), kSystemDof, problem_.horizon);
}

void OcpNlp::sync(const VecX& x) {
  if (ws_->valid && ws_->x_cached.size() == x.size() && ws_->x_cached == x) {
    return;
  }
  ws_->eval.compute(unflatten(x));
  ws_->x_cached = x;
  ws_->valid = true;
}

void OcpNlp::refresh_stage_weights(const VecX& x) {
  if (problem_.mode != PlannerMode::at) return;
  sync(x);
  stage_ = stage_weights_from_eval(ws_->eval);
}

double OcpNlp::objective(const VecX& x, VecX* grad) {
  sync(x);
  MatX grad_u;
  const double value = ws_->eval.cost(p_e_, o_e_, &stage_, penalty_weight_,
                                      grad ? &grad_u : nullptr, nullptr);
  if (grad) *grad = Eigen::Map<const VecX>(grad_u.data(), grad_u.size());
  return value;
}

void OcpNlp::equality(const VecX& x, VecX& c) {
  sync(x);
  ws_->eval.residuals(c);
}

void OcpNlp::equality_vjp(const VecX& x, const VecX& v, VecX& grad) {
  sync(x);
  Eigen::Map<MatX> grad_u(grad.data(), kSystemDof, problem_.horizon);
  ws_->eval.residual_vjp(v, grad_u);
}

Plan solve_ocp(const OcpProblem& problem, const MatX& u_init,
               const OcpSolveOptions& opts) {
  problem.validate();
  const int n = problem.horizon;
  MatX u0 = u_init.size() > 0 ? u_init : MatX::Zero(kSystemDof, n);

  double pen_w = opts.state_bound_weight;
  Plan plan;
  for (int attempt = 0;; ++attempt) {
    OcpNlp nlp(problem, pen_w);
    SolverOptions sopts = opts.solver;
    sopts.outer_begin = [&nlp, prev = opts.solver.outer_begin](const VecX& x) {
      nlp.refresh_stage_weights(x);
      if (prev) prev(x);
    };
    auto [x, report] = solve(nlp.spec(), OcpNlp::flatten(u0), sopts);

    plan.u = nlp.unflatten(x);
    rollout(problem.z0, plan.u, problem.ts, plan.q, plan.qdot);
    std::tie(plan.resolved_P_e, plan.resolved_O_e) = nlp.terminal_weights();
    plan.report = report;

    const ConstraintEval ce = constraint_eval(problem, plan.u);
    plan.max_chain_residual = ce.max_chain_residual();
    plan.max_bound_violation = ce.max_bound_violation();

    if (plan.max_bound_violation <= opts.state_bound_tol ||
        attempt >= opts.penalty_retries) {
      break;
    }
    pen_w *= opts.penalty_scale;
    u0 = plan.u;
  }

  if (problem.mode == PlannerMode::at) {
    plan.cost = cost_at(problem, plan.u, nullptr, &plan.breakdown);
  } else {
    plan.cost = cost_pt(problem, plan.u, nullptr, &plan.breakdown);
  }
  return plan;
}

}  // namespace catchmpc
