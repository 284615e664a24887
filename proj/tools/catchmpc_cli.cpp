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

// catchmpc command line: single plans, closed-loop episodes, and paired
// Monte-Carlo comparisons between the planner modes.
//
// Exit codes: 0 ok, 2 config error, 3 solver failure (plan only).

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catchmpc/config.hpp"
#include "catchmpc/io.hpp"
#include "catchmpc/montecarlo.hpp"
#include "catchmpc/mpc.hpp"

namespace {

using namespace catchmpc;

constexpr int kExitConfigError = 2;
constexpr int kExitSolverFailure = 3;

struct CommonArgs {
  std::string model_path;
  std::string config_path;
  std::string scenario_path;
  std::string out_dir = "out";
  std::string profile;  // empty: use the config's profile
  std::optional<std::uint64_t> seed;
  std::string tracking;  // "", "ideal", "first-order"
  std::optional<double> tau;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--model", args.model_path, "system model JSON")->required();
  cmd->add_option("--config", args.config_path, "planner config JSON")->required();
  cmd->add_option("--scenario", args.scenario_path, "scenario JSON")->required();
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--mode,--profile", args.profile,
                  "planner profile (pt, at_aggressive, at_balanced, at_smooth)");
  cmd->add_option("--seed", args.seed, "override the scenario seed");
  cmd->add_option("--tracking", args.tracking, "tracking model: ideal | first-order")
      ->check(CLI::IsMember({"ideal", "first-order"}));
  cmd->add_option("--tau", args.tau, "first-order tracking time constant [s]");
}

struct Inputs {
  SystemModel model;
  PlannerConfig config;
  Scenario scenario;
};

Inputs load_inputs(const CommonArgs& args) {
  Inputs in;
  in.model = load_system_model(args.model_path);
  in.config = load_planner_config(args.config_path);
  in.scenario = load_scenario(args.scenario_path);
  if (!args.profile.empty()) {
    const PlannerProfile p = planner_profile(args.profile);  // validates
    in.config.profile = p.name;
    in.config.mode = p.mode;
    PlannerWeights w = p.weights;
    w.R = in.config.weights.R;
    w.W = in.config.weights.W;
    w.eps_pos = in.config.weights.eps_pos;
    w.eps_ori = in.config.weights.eps_ori;
    in.config.weights = w;
  }
  if (args.seed.has_value()) in.scenario.seed = *args.seed;
  if (args.tracking == "ideal") in.config.sim.tracking = TrackingMode::ideal;
  if (args.tracking == "first-order") in.config.sim.tracking = TrackingMode::first_order;
  if (args.tau.has_value()) in.config.sim.tau = *args.tau;
  return in;
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::filesystem::create_directories(p);
  return p;
}

int cmd_plan(const CommonArgs& args) {
  const Inputs in = load_inputs(args);
  if (in.scenario.kind != Scenario::Kind::pose_task) {
    std::fprintf(stderr,
                 "error: field 'kind': plan requires a pose_task scenario "
                 "(explicit start state and target pose)\n");
    return kExitConfigError;
  }
  const auto out_dir = prepare_out_dir(args.out_dir);

  const MpcSettings settings = make_mpc_settings(in.config);
  OcpProblem problem;
  problem.model = &in.model;
  problem.z0 = in.scenario.initial_state;
  TargetPose target;
  target.pose = in.scenario.target_pose;
  target.t_catch = in.scenario.duration;
  problem.target = target;
  problem.horizon = settings.horizon;
  problem.ts = settings.ts;
  problem.weights = settings.weights;
  problem.mode = settings.mode;

  const Plan plan = solve_ocp(problem, MatX(), settings.solve);

  const bool failed =
      plan.report.status == SolveStatus::infeasible_stationary ||
      (plan.report.status == SolveStatus::max_iter &&
       plan.report.max_violation > settings.chain_soft_tol);

  write_plan_json(plan, settings.mode, settings.horizon, settings.ts,
                  (out_dir / "plan.json").string());

  std::printf("plan: mode=%s status=%s\n", to_string(settings.mode),
              to_string(plan.report.status));
  std::printf("  cost            %.6e\n", plan.cost);
  std::printf("    terminal_pos  %.6e\n", plan.breakdown.terminal_pos);
  std::printf("    terminal_ori  %.6e\n", plan.breakdown.terminal_ori);
  std::printf("    stage_pos     %.6e\n", plan.breakdown.stage_pos);
  std::printf("    stage_ori     %.6e\n", plan.breakdown.stage_ori);
  std::printf("    running_accel %.6e\n", plan.breakdown.running_accel);
  std::printf("    running_vel   %.6e\n", plan.breakdown.running_vel);
  std::printf("  iterations      outer=%d inner=%d\n",
              plan.report.outer_iterations, plan.report.inner_iterations);
  std::printf("  chain residual  %.3e (max over horizon)\n",
              plan.max_chain_residual);
  std::printf("  kkt residual    %.3e\n", plan.report.kkt_residual);
  std::printf("  wrote %s\n", (out_dir / "plan.json").string().c_str());

  if (failed) {
    std::fprintf(stderr, "error: solver failed (%s, violation %.3e)\n",
                 to_string(plan.report.status), plan.report.max_violation);
    return kExitSolverFailure;
  }
  return 0;
}

int cmd_episode(const CommonArgs& args) {
  const Inputs in = load_inputs(args);
  const auto out_dir = prepare_out_dir(args.out_dir);

  const EpisodeOutput out = run_episode(in.model, in.scenario, in.config);

  write_episode_jsonl(out.records, (out_dir / "episode.jsonl").string());
  write_episode_summary_csv(out.result,
                            (out_dir / "episode_summary.csv").string());
  if (in.scenario.kind == Scenario::Kind::throw_ball) {
    write_measurement_csv(out.measurements,
                          (out_dir / "measurements.csv").string());
  }

  std::printf("episode: outcome=%s cycles=%d E=%.4f grasp_dev_max=%.3e\n",
              to_string(out.result.outcome), out.result.cycles,
              out.result.effort, out.result.max_grasp_dev);
  std::printf("  scenario_hash=%llu mean_cycle=%.2f ms worst=%.2f ms\n",
              static_cast<unsigned long long>(out.result.scenario_hash),
              out.result.mean_cycle_s * 1e3, out.result.worst_cycle_s * 1e3);
  std::printf("  wrote %s\n", (out_dir / "episode.jsonl").string().c_str());
  return 0;
}

int cmd_montecarlo(const CommonArgs& args, int n_trials,
                   const std::string& modes_csv, std::uint64_t seed, int jobs) {
  const Inputs in = load_inputs(args);
  const auto out_dir = prepare_out_dir(args.out_dir);

  MonteCarloParams params;
  params.n_trials = n_trials;
  params.seed = seed;
  params.jobs = jobs;
  params.modes.clear();
  std::stringstream ss(modes_csv);
  std::string mode;
  while (std::getline(ss, mode, ',')) {
    if (!mode.empty()) params.modes.push_back(mode);
  }
  if (params.modes.empty()) {
    std::fprintf(stderr, "error: field '--mode': no modes given\n");
    return kExitConfigError;
  }

  const ComparisonReport report = monte_carlo(in.model, in.config, in.scenario, params);

  write_report_csv(report, (out_dir / "report.csv").string());
  write_report_summary_json(report, (out_dir / "summary.json").string());

  std::printf("%-14s %7s %7s %12s %14s %14s\n", "mode", "trials", "caught",
              "mean_E", "mean_overshoot", "mean_cycle_ms");
  for (const ModeSummary& s : report.summaries()) {
    std::printf("%-14s %7d %7d %12.4f %14.6f %14.3f\n", s.mode.c_str(),
                s.trials, s.caught, s.mean_effort, s.mean_overshoot,
                s.mean_cycle_ms);
  }
  std::printf("wrote %s and %s\n", (out_dir / "report.csv").string().c_str(),
              (out_dir / "summary.json").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual-arm closed-chain interception planner"};
  app.require_subcommand(1);

  CommonArgs plan_args, episode_args, mc_args;
  int n_trials = 100;
  std::string modes_csv = "pt,at_balanced";
  std::uint64_t mc_seed = 1;
  int jobs = 1;

  CLI::App* plan = app.add_subcommand("plan", "solve a single OCP instance");
  add_common(plan, plan_args);

  CLI::App* episode =
      app.add_subcommand("episode", "run one closed-loop episode");
  add_common(episode, episode_args);

  CLI::App* mc = app.add_subcommand(
      "montecarlo", "paired mode comparison over random pose tasks");
  add_common(mc, mc_args);
  mc->add_option("--n-trials", n_trials, "number of paired trials");
  mc->get_option("--mode")->description(
      "comma-separated profiles to compare (default pt,at_balanced)");
  mc->add_option("--jobs", jobs, "parallel trial workers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfigError;
  }

  try {
    if (plan->parsed()) return cmd_plan(plan_args);
    if (episode->parsed()) return cmd_episode(episode_args);
    if (mc->parsed()) {
      const std::string modes =
          mc_args.profile.empty() ? modes_csv : mc_args.profile;
      if (mc_args.seed.has_value()) mc_seed = *mc_args.seed;
      return cmd_montecarlo(mc_args, n_trials, modes, mc_seed, jobs);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  }
  return 0;
}
