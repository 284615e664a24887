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

#include "catchmpc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace catchmpc {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename Derived>
json vec_json(const Eigen::MatrixBase<Derived>& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json mat_cols_json(const MatX& m) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < m.cols(); ++k) arr.push_back(vec_json(m.col(k)));
  return arr;
}

json solver_json(const SolveReport& r) {
  return json{{"status", to_string(r.status)},
              {"outer_iterations", r.outer_iterations},
              {"inner_iterations", r.inner_iterations},
              {"objective", r.objective},
              {"max_violation", r.max_violation},
              {"kkt_residual", r.kkt_residual},
              {"wall_time_ms", r.wall_time_s * 1e3}};
}

json breakdown_json(const CostBreakdown& b) {
  return json{{"terminal_pos", b.terminal_pos},
              {"terminal_ori", b.terminal_ori},
              {"stage_pos", b.stage_pos},
              {"stage_ori", b.stage_ori},
              {"running_accel", b.running_accel},
              {"running_vel", b.running_vel},
              {"state_penalty", b.state_penalty}};
}

json plan_json(const Plan& plan) {
  return json{{"cost", plan.cost},
              {"breakdown", breakdown_json(plan.breakdown)},
              {"resolved_P_e", plan.resolved_P_e},
              {"resolved_O_e", plan.resolved_O_e},
              {"max_chain_residual", plan.max_chain_residual},
              {"max_bound_violation", plan.max_bound_violation},
              {"u", mat_cols_json(plan.u)},
              {"q", mat_cols_json(plan.q)},
              {"qdot", mat_cols_json(plan.qdot)},
              {"solver", solver_json(plan.report)}};
}

std::ofstream open_out(const std::string& path, const std::string& what) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(what + ": cannot write '" + path + "'");
  return out;
}

}  // namespace

void write_episode_jsonl(const std::vector<CycleRecord>& records,
                         const std::string& path) {
  std::ofstream out = open_out(path, "episode log");
  for (const CycleRecord& rec : records) {
    json j{{"t", rec.t},
           {"mode", to_string(rec.mode)},
           {"degraded", rec.degraded},
           {"state", {{"q", vec_json(rec.state.q)}, {"qdot", vec_json(rec.state.qdot)}}},
           {"target",
            {{"p", vec_json(rec.target.pose.p)},
             {"phi", vec_json(rec.target.pose.phi.wxyz())},
             {"t_catch", rec.target.t_catch},
             {"impact_velocity", vec_json(rec.target.impact_velocity)}}},
           {"u_exec", vec_json(rec.u_exec)},
           {"grasp_dev", rec.grasp_dev},
           {"plan", plan_json(rec.plan)},
           {"compute_ms", rec.compute_time * 1e3}};
    if (rec.has_ball) {
      j["ball"] = {{"p", vec_json(rec.ball_p)}, {"v", vec_json(rec.ball_v)}};
    }
    out << j.dump() << "\n";
  }
}

void write_episode_summary_csv(const EpisodeResult& result,
                               const std::string& path) {
  std::ofstream out = open_out(path, "episode summary");
  out << "outcome,E,E_left,E_right,max_grasp_dev,overshoot_x,overshoot_y,"
         "overshoot_z,cycles,degraded_cycles,final_pos_error,"
         "max_chain_residual_converged,scenario_hash,mean_cycle_ms,"
         "worst_cycle_ms\n";
  out << to_string(result.outcome) << ',' << fmt_double(result.effort) << ','
      << fmt_double(result.effort_left) << ','
      << fmt_double(result.effort_right) << ','
      << fmt_double(result.max_grasp_dev) << ','
      << fmt_double(result.overshoot.x()) << ','
      << fmt_double(result.overshoot.y()) << ','
      << fmt_double(result.overshoot.z()) << ',' << result.cycles << ','
      << result.degraded_cycles << ',' << fmt_double(result.final_pos_error)
      << ',' << fmt_double(result.max_chain_residual_converged) << ','
      << result.scenario_hash << ',' << fmt_double(result.mean_cycle_s * 1e3)
      << ',' << fmt_double(result.worst_cycle_s * 1e3) << '\n';
}

void write_report_csv(const ComparisonReport& report,
                      const std::string& path) {
  std::ofstream out = open_out(path, "comparison report");
  out << "trial,mode,outcome,E,overshoot_x,overshoot_y,overshoot_z,"
         "max_grasp_dev,mean_cycle_ms,worst_cycle_ms\n";
  for (const TrialRow& row : report.rows) {
    const EpisodeResult& r = row.result;
    out << row.trial << ',' << row.mode << ',' << to_string(r.outcome) << ','
        << fmt_double(r.effort) << ',' << fmt_double(r.overshoot.x()) << ','
        << fmt_double(r.overshoot.y()) << ',' << fmt_double(r.overshoot.z())
        << ',' << fmt_double(r.max_grasp_dev) << ','
        << fmt_double(r.mean_cycle_s * 1e3) << ','
        << fmt_double(r.worst_cycle_s * 1e3) << '\n';
  }
}

void write_report_summary_json(const ComparisonReport& report,
                               const std::string& path) {
  json modes = json::array();
  for (const ModeSummary& s : report.summaries()) {
    modes.push_back({{"mode", s.mode},
                     {"trials", s.trials},
                     {"caught", s.caught},
                     {"mean_E", s.mean_effort},
                     {"mean_E_left", s.mean_effort_left},
                     {"mean_E_right", s.mean_effort_right},
                     {"mean_overshoot", s.mean_overshoot},
                     {"max_grasp_dev", s.max_grasp_dev},
                     {"max_chain_residual_converged",
                      s.max_chain_residual_converged},
                     {"mean_cycle_ms", s.mean_cycle_ms},
                     {"worst_cycle_ms", s.worst_cycle_ms}});
  }
  json trials = json::array();
  for (const TrialRow& row : report.rows) {
    const EpisodeResult& r = row.result;
    trials.push_back({{"trial", row.trial},
                      {"mode", row.mode},
                      {"outcome", to_string(r.outcome)},
                      {"E", r.effort},
                      {"E_left", r.effort_left},
                      {"E_right", r.effort_right},
                      {"overshoot", vec_json(r.overshoot)},
                      {"max_grasp_dev", r.max_grasp_dev},
                      {"final_pos_error", r.final_pos_error},
                      {"cycles", r.cycles},
                      {"degraded_cycles", r.degraded_cycles},
                      {"scenario_hash", r.scenario_hash}});
  }
  json j{{"n_trials", report.n_trials},
         {"seed", report.seed},
         {"modes", modes},
         {"trials", trials}};
  open_out(path, "comparison summary") << j.dump(2) << "\n";
}

void write_plan_json(const Plan& plan, PlannerMode mode, int horizon,
                     double ts, const std::string& path) {
  json j{{"mode", to_string(mode)},
         {"horizon", horizon},
         {"ts", ts},
         {"plan", plan_json(plan)}};
  open_out(path, "plan artifact") << j.dump(2) << "\n";
}

void write_measurement_csv(const std::vector<MeasurementSample>& samples,
                           const std::string& path) {
  std::ofstream out = open_out(path, "measurement log");
  out << "t,px,py,pz\n";
  for (const MeasurementSample& s : samples) {
    out << fmt_double(s.t) << ',' << fmt_double(s.p.x()) << ','
        << fmt_double(s.p.y()) << ',' << fmt_double(s.p.z()) << '\n';
  }
}

std::vector<MeasurementSample> read_measurement_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("measurement log: cannot open '" + path + "'");
  std::vector<MeasurementSample> samples;
  std::string line;
  if (!std::getline(in, line)) return samples;  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    MeasurementSample s;
    std::stringstream ss(line);
    std::string field;
    double* slots[4] = {&s.t, &s.p.x(), &s.p.y(), &s.p.z()};
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(ss, field, ',')) {
        throw std::runtime_error("measurement log: malformed row '" + line + "'");
      }
      *slots[i] = std::stod(field);
    }
    samples.push_back(s);
  }
  return samples;
}

}  // namespace catchmpc
