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

#include "catchmpc/montecarlo.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

#include "catchmpc/rng.hpp"

namespace catchmpc {

namespace {

Vec3 sample_in_zone(Rng& rng, const SafeZone& zone) {
  return Vec3(rng.uniform(zone.min_corner.x(), zone.max_corner.x()),
              rng.uniform(zone.min_corner.y(), zone.max_corner.y()),
              rng.uniform(zone.min_corner.z(), zone.max_corner.z()));
}

/// Builds one paired trial: sampled start/target positions (opening-up
/// orientation), with the start reached by a shared setup drive from the
/// base state.
Scenario make_trial_scenario(const SystemModel& model, const PlannerConfig& cfg,
                             const Scenario& base, int trial,
                             std::uint64_t trial_seed) {
  Rng rng(trial_seed);
  Scenario trial_scenario = base;
  trial_scenario.kind = Scenario::Kind::pose_task;
  trial_scenario.seed = trial_seed;
  trial_scenario.name = "mc_trial_" + std::to_string(trial);
  trial_scenario.duration = cfg.sim.task_duration;

  for (int attempt = 0; attempt < 8; ++attempt) {
    const Vec3 start = sample_in_zone(rng, base.safe_zone);
    const Vec3 target = sample_in_zone(rng, base.safe_zone);
    if ((start - target).norm() < cfg.sim.min_separation) continue;

    Scenario setup = base;
    setup.kind = Scenario::Kind::pose_task;
    setup.seed = 0;
    setup.name = trial_scenario.name + "_setup";
    setup.target_pose = Pose{start, UnitQuaternion::identity()};
    setup.duration = cfg.sim.task_duration;

    const EpisodeOutput out = run_episode(model, setup, cfg, "at_balanced");
    if (out.result.final_pos_error > 0.02 && attempt < 7) continue;

    trial_scenario.initial_state = out.final_state;
    trial_scenario.initial_state.qdot.setZero();
    trial_scenario.start_pose =
        fk_catcher(model, out.final_state.q.head<kArmDof>(), ArmSide::left);
    trial_scenario.target_pose = Pose{target, UnitQuaternion::identity()};
    break;
  }
  return trial_scenario;
}

}  // namespace

std::vector<ModeSummary> ComparisonReport::summaries() const {
  std::vector<ModeSummary> out;
  for (const TrialRow& row : rows) {
    ModeSummary* s = nullptr;
    for (ModeSummary& cand : out) {
      if (cand.mode == row.mode) {
        s = &cand;
        break;
      }
    }
    if (s == nullptr) {
      out.push_back(ModeSummary{});
      s = &out.back();
      s->mode = row.mode;
    }
    const EpisodeResult& r = row.result;
    s->trials += 1;
    if (r.outcome == EpisodeResult::Outcome::caught) s->caught += 1;
    s->mean_effort += r.effort;
    s->mean_effort_left += r.effort_left;
    s->mean_effort_right += r.effort_right;
    s->mean_overshoot += r.overshoot.maxCoeff();
    s->mean_cycle_ms += r.mean_cycle_s * 1e3;
    s->worst_cycle_ms = std::max(s->worst_cycle_ms, r.worst_cycle_s * 1e3);
    s->max_grasp_dev = std::max(s->max_grasp_dev, r.max_grasp_dev);
    s->max_chain_residual_converged = std::max(
        s->max_chain_residual_converged, r.max_chain_residual_converged);
  }
  for (ModeSummary& s : out) {
    if (s.trials > 0) {
      s.mean_effort /= s.trials;
      s.mean_effort_left /= s.trials;
      s.mean_effort_right /= s.trials;
      s.mean_overshoot /= s.trials;
      s.mean_cycle_ms /= s.trials;
    }
  }
  return out;
}

ComparisonReport monte_carlo(const SystemModel& model, const PlannerConfig& cfg,
                             const Scenario& base,
                             const MonteCarloParams& params) {
  if (params.n_trials < 1) {
    throw std::invalid_argument("monte_carlo: n_trials must be >= 1");
  }
  if (params.modes.empty()) {
    throw std::invalid_argument("monte_carlo: at least one mode required");
  }
  for (const std::string& mode : params.modes) {
    planner_profile(mode);  // validates the names up front
  }

  ComparisonReport report;
  report.n_trials = params.n_trials;
  report.seed = params.seed;
  report.rows.resize(static_cast<std::size_t>(params.n_trials) *
                     params.modes.size());

  std::atomic<int> next_trial{0};
  auto worker = [&]() {
    for (;;) {
      const int trial = next_trial.fetch_add(1);
      if (trial >= params.n_trials) return;
      const std::uint64_t trial_seed = Rng::mix(params.seed, trial);
      const Scenario scenario =
          make_trial_scenario(model, cfg, base, trial, trial_seed);

      for (std::size_t m = 0; m < params.modes.size(); ++m) {
        const EpisodeOutput out =
            run_episode(model, scenario, cfg, params.modes[m]);
        TrialRow& row = report.rows[trial * params.modes.size() + m];
        row.trial = trial;
        row.mode = params.modes[m];
        row.result = out.result;
      }
    }
  };

  const int jobs = std::max(1, params.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  // Pairing discipline: every mode must have seen the identical scenario.
  for (int trial = 0; trial < params.n_trials; ++trial) {
    const std::uint64_t h0 =
        report.rows[trial * params.modes.size()].result.scenario_hash;
    for (std::size_t m = 1; m < params.modes.size(); ++m) {
      if (report.rows[trial * params.modes.size() + m].result.scenario_hash !=
          h0) {
        throw std::logic_error("monte_carlo: scenario hash mismatch in trial " +
                               std::to_string(trial));
      }
    }
  }
  return report;
}

}  // namespace catchmpc
