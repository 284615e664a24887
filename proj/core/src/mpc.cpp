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

#include "catchmpc/mpc.hpp"

#include <chrono>
#include <cmath>

#include "catchmpc/rng.hpp"

namespace catchmpc {

MpcSettings make_mpc_settings(const PlannerConfig& cfg,
                              const std::string& profile_override) {
  MpcSettings s;
  if (profile_override.empty() || profile_override == cfg.profile) {
    s.mode = cfg.mode;
    s.weights = cfg.weights;
  } else {
    const PlannerProfile p = planner_profile(profile_override);
    s.mode = p.mode;
    s.weights = p.weights;
    // R/W and sensitivities are shared across modes under comparison.
    s.weights.R = cfg.weights.R;
    s.weights.W = cfg.weights.W;
    s.weights.eps_pos = cfg.weights.eps_pos;
    s.weights.eps_ori = cfg.weights.eps_ori;
  }
  s.horizon = cfg.horizon;
  s.ts = cfg.ts;
  s.solve = cfg.solve;
  s.chain_soft_tol = cfg.chain_soft_tol;
  return s;
}

CycleRecord mpc_step(const SystemModel& model, const SystemState& state,
                     const TargetPose& target, const MpcSettings& settings,
                     const CycleRecord* prev) {
  const auto t0 = std::chrono::steady_clock::now();

  OcpProblem problem;
  problem.model = &model;
  problem.z0 = state;
  problem.target = target;
  problem.horizon = settings.horizon;
  problem.ts = settings.ts;
  problem.weights = settings.weights;
  problem.mode = settings.mode;

  MatX u_init;
  if (prev != nullptr && prev->plan.u.size() > 0) {
    u_init = warm_start_shift(prev->plan.u);
  }

  CycleRecord rec;
  rec.mode = settings.mode;
  rec.target = target;
  rec.state = state;
  rec.plan = solve_ocp(problem, u_init, settings.solve);

  const bool usable =
      rec.plan.report.status == SolveStatus::converged ||
      (rec.plan.report.status == SolveStatus::max_iter &&
       rec.plan.report.max_violation <= settings.chain_soft_tol);
  if (!usable) {
    rec.degraded = true;
    if (prev != nullptr && prev->plan.u.size() > 0) {
      rec.plan.u = warm_start_shift(prev->plan.u);
    } else {
      rec.plan.u = MatX::Zero(kSystemDof, settings.horizon);
    }
    rollout(state, rec.plan.u, settings.ts, rec.plan.q, rec.plan.qdot);
    const ConstraintEval ce = constraint_eval(problem, rec.plan.u);
    rec.plan.max_chain_residual = ce.max_chain_residual();
    rec.plan.max_bound_violation = ce.max_bound_violation();
    if (settings.mode == PlannerMode::at) {
      rec.plan.cost = cost_at(problem, rec.plan.u, nullptr, &rec.plan.breakdown);
    } else {
      rec.plan.cost = cost_pt(problem, rec.plan.u, nullptr, &rec.plan.breakdown);
    }
  }
  rec.u_exec = rec.plan.u.col(0);
  rec.compute_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

ControlEffort control_effort(const std::vector<CycleRecord>& records) {
  ControlEffort e;
  for (const CycleRecord& rec : records) {
    e.left += rec.u_exec.head<kArmDof>().squaredNorm();
    e.right += rec.u_exec.tail<kArmDof>().squaredNorm();
  }
  e.total = e.left + e.right;
  return e;
}

namespace {

Vec3 ball_position(const Scenario& s, const Vec3& gravity, double t) {
  return s.ball_p0 + s.ball_v0 * t + 0.5 * gravity * t * t;
}

Vec3 ball_velocity(const Scenario& s, const Vec3& gravity, double t) {
  return s.ball_v0 + gravity * t;
}

Pose catcher_pose(const SystemModel& model, const SystemState& state) {
  return fk_catcher(model, state.q.head<kArmDof>(), ArmSide::left);
}

/// Signed per-axis excursion beyond the target along the start-to-target
/// direction, maxed over the trajectory.
Vec3 overshoot_metric(const std::vector<Vec3>& positions, const Vec3& start,
                      const Vec3& target) {
  Vec3 os = Vec3::Zero();
  for (int a = 0; a < 3; ++a) {
    const double d = target(a) - start(a);
    const double dir = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    if (dir == 0.0) continue;
    for (const Vec3& p : positions) {
      os(a) = std::max(os(a), dir * (p(a) - target(a)));
    }
  }
  return os;
}

}  // namespace

EpisodeOutput run_episode(const SystemModel& model, const Scenario& scenario,
                          const PlannerConfig& cfg,
                          const std::string& profile_override) {
  const MpcSettings settings = make_mpc_settings(cfg, profile_override);
  const bool pose_task = scenario.kind == Scenario::Kind::pose_task;

  EpisodeOutput out;
  out.result.scenario_hash = scenario_hash(scenario);

  SystemState state = scenario.initial_state;
  Tracking tracking;
  tracking.mode = cfg.sim.tracking;
  tracking.tau = cfg.sim.tau;

  Rng rng(scenario.seed);
  BallTracker tracker(cfg.filter);
  const Vec3 gravity = cfg.filter.gravity;

  std::optional<TargetPose> target;
  bool target_locked = false;
  std::optional<UnitQuaternion> prev_ori;
  bool ever_target = false;

  if (pose_task) {
    TargetPose fixed;
    fixed.pose = scenario.target_pose;
    fixed.t_catch = scenario.duration;
    target = fixed;
    ever_target = true;
  }

  const double timeout =
      pose_task ? scenario.duration : cfg.sim.episode_timeout;
  const Vec3 start_cpos = catcher_pose(model, state).p;
  std::vector<Vec3> cpos_history{start_cpos};

  auto grasp_dev = [&](const SystemState& s) {
    return std::abs(grasp_point_distance(model, s.q.head<kArmDof>(),
                                         s.q.tail<kArmDof>()) -
                    model.d_nom);
  };
  out.result.max_grasp_dev = grasp_dev(state);

  int next_meas = 0;
  int settle_count = 0;
  int consecutive_degraded = 0;
  bool caught = false;
  bool aborted = false;
  double t_end = 0.0;

  for (int k = 0;; ++k) {
    const double t = k * settings.ts;
    t_end = t;
    if (t > timeout + 1e-9) break;

    if (!pose_task) {
      // Feed all measurements due by now.
      while (scenario.meas_rate > 0.0 &&
             next_meas / scenario.meas_rate <= t + 1e-12) {
        const double tm = next_meas / scenario.meas_rate;
        Vec3 noise(rng.normal(), rng.normal(), rng.normal());
        const Vec3 z = ball_position(scenario, gravity, tm) +
                       scenario.meas_sigma * noise;
        out.measurements.push_back(MeasurementSample{tm, z});
        tracker.ingest(z, tm);
        ++next_meas;
      }
      if (target.has_value() && target->t_catch - t < cfg.targeting.t_lock) {
        target_locked = true;
      }
      if (tracker.initialized() && !target_locked) {
        const PredictedTrajectory traj =
            propagate(tracker.estimate(), cfg.targeting.pred_horizon,
                      cfg.targeting.dt_pred, cfg.filter);
        const auto candidates = filter_safe(traj, scenario.safe_zone);
        const auto sel = select_target(candidates, catcher_pose(model, state),
                                       t, cfg.targeting, prev_ori);
        if (sel.has_value()) {
          target = sel;
          prev_ori = sel->pose.phi;
          ever_target = true;
        }
      }
    }

    Vec14 u0 = Vec14::Zero();
    if (target.has_value()) {
      CycleRecord rec =
          mpc_step(model, state, *target, settings,
                   out.records.empty() ? nullptr : &out.records.back());
      rec.t = t;
      rec.grasp_dev = grasp_dev(state);
      if (!pose_task) {
        rec.ball_p = ball_position(scenario, gravity, t);
        rec.ball_v = ball_velocity(scenario, gravity, t);
        rec.has_ball = true;
      }
      u0 = rec.u_exec;
      consecutive_degraded = rec.degraded ? consecutive_degraded + 1 : 0;
      if (rec.degraded) out.result.degraded_cycles += 1;
      if (rec.plan.report.status == SolveStatus::converged) {
        out.result.max_chain_residual_converged =
            std::max(out.result.max_chain_residual_converged,
                     rec.plan.max_chain_residual);
      }
      out.records.push_back(std::move(rec));
      if (consecutive_degraded > cfg.sim.max_degraded_cycles) {
        aborted = true;
        break;
      }
    }

    SystemState next = plant_advance(state, u0, settings.ts, tracking);
    if (!next.q.allFinite() || !next.qdot.allFinite()) {
      aborted = true;
      break;
    }

    if (!pose_task) {
      // Catch detection on the realized sub-step trajectory; the executed
      // acceleration is constant over the interval, so the joint path is
      // quadratic and exact.
      const int substeps = 8;
      for (int i = 1; i <= substeps && !caught; ++i) {
        const double tau = settings.ts * i / substeps;
        SystemState mid;
        mid.q = state.q + tau * state.qdot + 0.5 * tau * tau * tracking.accel;
        mid.qdot = state.qdot + tau * tracking.accel;
        const Pose cp = catcher_pose(model, mid);
        const Vec3 bp = ball_position(scenario, gravity, t + tau);
        const Vec3 bv = ball_velocity(scenario, gravity, t + tau);
        if (catch_check(bp, bv, cp, scenario.r_catch)) {
          caught = true;
          t_end = t + tau;
        }
      }
      if (caught) {
        state = next;
        cpos_history.push_back(catcher_pose(model, state).p);
        out.result.max_grasp_dev =
            std::max(out.result.max_grasp_dev, grasp_dev(state));
        break;
      }
    }

    state = next;
    cpos_history.push_back(catcher_pose(model, state).p);
    out.result.max_grasp_dev =
        std::max(out.result.max_grasp_dev, grasp_dev(state));

    if (!pose_task &&
        ball_position(scenario, gravity, t + settings.ts).z() <
            cfg.filter.floor_z) {
      t_end = t + settings.ts;
      break;
    }

    if (pose_task) {
      const double pos_err =
          (catcher_pose(model, state).p - scenario.target_pose.p).norm();
      const bool settled = pos_err <= cfg.sim.settle_pos_tol &&
                           state.qdot.cwiseAbs().maxCoeff() <=
                               cfg.sim.settle_vel_tol;
      settle_count = settled ? settle_count + 1 : 0;
      if (t + settings.ts >= cfg.sim.task_min_duration &&
          settle_count >= cfg.sim.settle_cycles) {
        t_end = t + settings.ts;
        break;
      }
    }
  }

  // ---- Result assembly.
  EpisodeResult& res = out.result;
  const ControlEffort effort = control_effort(out.records);
  res.effort = effort.total;
  res.effort_left = effort.left;
  res.effort_right = effort.right;
  res.cycles = static_cast<int>(out.records.size());

  double sum_ct = 0.0;
  for (const CycleRecord& rec : out.records) {
    sum_ct += rec.compute_time;
    res.worst_cycle_s = std::max(res.worst_cycle_s, rec.compute_time);
  }
  res.mean_cycle_s = out.records.empty() ? 0.0 : sum_ct / res.cycles;

  const Vec3 final_cpos = catcher_pose(model, state).p;
  if (target.has_value()) {
    res.final_pos_error = (final_cpos - target->pose.p).norm();
    res.overshoot = overshoot_metric(cpos_history, start_cpos, target->pose.p);
  }

  if (aborted) {
    res.outcome = EpisodeResult::Outcome::aborted;
  } else if (pose_task) {
    res.outcome = res.final_pos_error <= scenario.r_catch
                      ? EpisodeResult::Outcome::caught
                      : EpisodeResult::Outcome::missed;
  } else if (caught) {
    res.outcome = EpisodeResult::Outcome::caught;
  } else if (ever_target) {
    res.outcome = EpisodeResult::Outcome::missed;
  } else {
    res.outcome = EpisodeResult::Outcome::no_target;
  }

  (void)t_end;
  out.final_state = state;
  return out;
}

}  // namespace catchmpc
