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

#include "catchmpc/config.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace catchmpc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::runtime_error("config: field '" + field + "': " + what);
}

double get_num(const json& j, const std::string& key, double fallback,
               const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(ctx + key, "expected a number");
  return it->get<double>();
}

int get_int(const json& j, const std::string& key, int fallback,
            const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) fail(ctx + key, "expected an integer");
  return it->get<int>();
}

bool get_bool(const json& j, const std::string& key, bool fallback,
              const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) fail(ctx + key, "expected a boolean");
  return it->get<bool>();
}

template <int N>
Eigen::Matrix<double, N, 1> get_vec(const json& j, const std::string& key,
                                    const Eigen::Matrix<double, N, 1>& fallback,
                                    const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_array() || it->size() != N) {
    fail(ctx + key, "expected array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v(i) = (*it)[i].get<double>();
  return v;
}

// R / W accept either one scalar (applied to every joint) or a 14-array.
Vec14 get_diag14(const json& j, const std::string& key, const Vec14& fallback,
                 const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (it->is_number()) return Vec14::Constant(it->get<double>());
  return get_vec<kSystemDof>(j, key, fallback, ctx);
}

json load_json_file(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(what + ": cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(what + " '" + path + "': " + e.what());
  }
  return j;
}

PlannerWeights parse_weights(const json& j, PlannerWeights base,
                             const std::string& ctx) {
  base.R = get_diag14(j, "R", base.R, ctx);
  base.W = get_diag14(j, "W", base.W, ctx);
  if (auto it = j.find("pt_terminal"); it != j.end()) {
    base.pt_terminal.P_e = get_num(*it, "P_e", base.pt_terminal.P_e, ctx + "pt_terminal.");
    base.pt_terminal.O_e = get_num(*it, "O_e", base.pt_terminal.O_e, ctx + "pt_terminal.");
  }
  if (auto it = j.find("at_terminal"); it != j.end()) {
    auto& t = base.at_terminal;
    t.P_e_max = get_num(*it, "P_e_max", t.P_e_max, ctx + "at_terminal.");
    t.P_e_min = get_num(*it, "P_e_min", t.P_e_min, ctx + "at_terminal.");
    t.O_e_max = get_num(*it, "O_e_max", t.O_e_max, ctx + "at_terminal.");
    t.O_e_min = get_num(*it, "O_e_min", t.O_e_min, ctx + "at_terminal.");
  }
  if (auto it = j.find("at_stage"); it != j.end()) {
    auto& s = base.at_stage;
    s.Q_pos_max = get_num(*it, "Q_pos_max", s.Q_pos_max, ctx + "at_stage.");
    s.Q_pos_min = get_num(*it, "Q_pos_min", s.Q_pos_min, ctx + "at_stage.");
    s.Q_ori_max = get_num(*it, "Q_ori_max", s.Q_ori_max, ctx + "at_stage.");
    s.Q_ori_min = get_num(*it, "Q_ori_min", s.Q_ori_min, ctx + "at_stage.");
  }
  base.eps_pos = get_num(j, "eps_pos", base.eps_pos, ctx);
  base.eps_ori = get_num(j, "eps_ori", base.eps_ori, ctx);
  return base;
}

SafeZone parse_safe_zone(const json& j, SafeZone base, const std::string& ctx) {
  base.min_corner = get_vec<3>(j, "min", base.min_corner, ctx);
  base.max_corner = get_vec<3>(j, "max", base.max_corner, ctx);
  return base;
}

Pose parse_pose(const json& j, const std::string& ctx) {
  Pose pose;
  pose.p = get_vec<3>(j, "p", Vec3::Zero(), ctx);
  const Vec4 q = get_vec<4>(j, "phi", Vec4(1, 0, 0, 0), ctx);
  pose.phi = UnitQuaternion(q(0), q(1), q(2), q(3));
  return pose;
}

json pose_to_json(const Pose& pose) {
  const Vec4 q = pose.phi.wxyz();
  return json{{"p", {pose.p(0), pose.p(1), pose.p(2)}},
              {"phi", {q(0), q(1), q(2), q(3)}}};
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["kind"] = s.kind == Scenario::Kind::throw_ball ? "throw" : "pose_task";
  j["initial_state"] = {
      {"q", std::vector<double>(s.initial_state.q.data(), s.initial_state.q.data() + kSystemDof)},
      {"qdot", std::vector<double>(s.initial_state.qdot.data(), s.initial_state.qdot.data() + kSystemDof)}};
  j["safe_zone"] = {{"min", {s.safe_zone.min_corner(0), s.safe_zone.min_corner(1), s.safe_zone.min_corner(2)}},
                    {"max", {s.safe_zone.max_corner(0), s.safe_zone.max_corner(1), s.safe_zone.max_corner(2)}}};
  j["r_catch"] = s.r_catch;
  j["seed"] = s.seed;
  if (s.kind == Scenario::Kind::throw_ball) {
    j["ball"] = {{"p0", {s.ball_p0(0), s.ball_p0(1), s.ball_p0(2)}},
                 {"v0", {s.ball_v0(0), s.ball_v0(1), s.ball_v0(2)}}};
    j["noise"] = {{"sigma", s.meas_sigma}, {"rate", s.meas_rate}};
  } else {
    j["start_pose"] = pose_to_json(s.start_pose);
    j["target_pose"] = pose_to_json(s.target_pose);
    j["duration"] = s.duration;
  }
  return j;
}

}  // namespace

void PlannerConfig::validate() const {
  if (horizon < 2) fail("horizon", "must be >= 2");
  if (!(ts > 0.0)) fail("ts", "must be > 0");
  weights.validate();
  safe_zone.validate();
  filter.validate();
  if (!(sim.r_catch > 0.0)) fail("sim.r_catch", "must be > 0");
}

PlannerConfig load_planner_config(const std::string& path) {
  const json j = load_json_file(path, "planner config");
  PlannerConfig cfg;

  if (auto it = j.find("profile"); it != j.end()) {
    cfg.profile = it->get<std::string>();
  }
  if (cfg.profile == "custom") {
    auto it = j.find("weights");
    if (it == j.end()) fail("weights", "required when profile is 'custom'");
    const std::string mode = j.value("mode", std::string("at"));
    if (mode != "pt" && mode != "at") fail("mode", "must be 'pt' or 'at'");
    cfg.mode = mode == "pt" ? PlannerMode::pt : PlannerMode::at;
    cfg.weights = parse_weights(*it, PlannerWeights{}, "weights.");
  } else {
    PlannerProfile profile = planner_profile(cfg.profile);  // throws on unknown
    cfg.mode = profile.mode;
    cfg.weights = profile.weights;
    if (auto it = j.find("weights"); it != j.end()) {
      cfg.weights = parse_weights(*it, cfg.weights, "weights.");
    }
  }

  cfg.horizon = get_int(j, "horizon", cfg.horizon, "");
  cfg.ts = get_num(j, "ts", cfg.ts, "");
  cfg.chain_soft_tol = get_num(j, "chain_soft_tol", cfg.chain_soft_tol, "");

  if (auto it = j.find("solver"); it != j.end()) {
    SolverOptions& s = cfg.solve.solver;
    s.tol_kkt = get_num(*it, "tol_kkt", s.tol_kkt, "solver.");
    s.tol_eq = get_num(*it, "tol_eq", s.tol_eq, "solver.");
    s.max_outer = get_int(*it, "max_outer", s.max_outer, "solver.");
    s.max_inner = get_int(*it, "max_inner", s.max_inner, "solver.");
    s.rho0 = get_num(*it, "rho0", s.rho0, "solver.");
    s.rho_scale = get_num(*it, "rho_scale", s.rho_scale, "solver.");
    s.eq_improve = get_num(*it, "eq_improve", s.eq_improve, "solver.");
    s.lbfgs_memory = get_int(*it, "lbfgs_memory", s.lbfgs_memory, "solver.");
    cfg.solve.state_bound_weight =
        get_num(*it, "state_bound_weight", cfg.solve.state_bound_weight, "solver.");
    cfg.solve.state_bound_tol =
        get_num(*it, "state_bound_tol", cfg.solve.state_bound_tol, "solver.");
    cfg.solve.penalty_retries =
        get_int(*it, "penalty_retries", cfg.solve.penalty_retries, "solver.");
    cfg.solve.penalty_scale =
        get_num(*it, "penalty_scale", cfg.solve.penalty_scale, "solver.");
  }

  if (auto it = j.find("safe_zone"); it != j.end()) {
    cfg.safe_zone = parse_safe_zone(*it, cfg.safe_zone, "safe_zone.");
  }

  if (auto it = j.find("targeting"); it != j.end()) {
    TargetingConfig& t = cfg.targeting;
    t.v_min_impact = get_num(*it, "v_min_impact", t.v_min_impact, "targeting.");
    t.t_lock = get_num(*it, "t_lock", t.t_lock, "targeting.");
    t.opening_axis_world_up =
        get_bool(*it, "opening_axis_world_up", t.opening_axis_world_up, "targeting.");
    t.dt_pred = get_num(*it, "dt_pred", t.dt_pred, "targeting.");
    t.pred_horizon = get_num(*it, "pred_horizon", t.pred_horizon, "targeting.");
  }

  if (auto it = j.find("filter"); it != j.end()) {
    FilterConfig& f = cfg.filter;
    f.dt = get_num(*it, "dt", f.dt, "filter.");
    f.gravity = get_vec<3>(*it, "gravity", f.gravity, "filter.");
    f.process_noise_accel =
        get_num(*it, "process_noise_accel", f.process_noise_accel, "filter.");
    f.measurement_noise =
        get_num(*it, "measurement_noise", f.measurement_noise, "filter.");
    f.init_pos_var = get_num(*it, "init_pos_var", f.init_pos_var, "filter.");
    f.init_vel_var = get_num(*it, "init_vel_var", f.init_vel_var, "filter.");
    f.floor_z = get_num(*it, "floor_z", f.floor_z, "filter.");
  }

  if (auto it = j.find("sim"); it != j.end()) {
    SimParams& s = cfg.sim;
    s.r_catch = get_num(*it, "r_catch", s.r_catch, "sim.");
    if (auto tr = it->find("tracking"); tr != it->end()) {
      const std::string mode = tr->get<std::string>();
      if (mode == "ideal") {
        s.tracking = TrackingMode::ideal;
      } else if (mode == "first_order") {
        s.tracking = TrackingMode::first_order;
      } else {
        fail("sim.tracking", "must be 'ideal' or 'first_order'");
      }
    }
    s.tau = get_num(*it, "tau", s.tau, "sim.");
    s.episode_timeout = get_num(*it, "episode_timeout", s.episode_timeout, "sim.");
    s.task_duration = get_num(*it, "task_duration", s.task_duration, "sim.");
    s.task_min_duration =
        get_num(*it, "task_min_duration", s.task_min_duration, "sim.");
    s.settle_pos_tol = get_num(*it, "settle_pos_tol", s.settle_pos_tol, "sim.");
    s.settle_vel_tol = get_num(*it, "settle_vel_tol", s.settle_vel_tol, "sim.");
    s.settle_cycles = get_int(*it, "settle_cycles", s.settle_cycles, "sim.");
    s.meas_sigma = get_num(*it, "meas_sigma", s.meas_sigma, "sim.");
    s.meas_rate = get_num(*it, "meas_rate", s.meas_rate, "sim.");
    s.min_separation = get_num(*it, "min_separation", s.min_separation, "sim.");
    s.max_degraded_cycles =
        get_int(*it, "max_degraded_cycles", s.max_degraded_cycles, "sim.");
  }

  cfg.validate();
  return cfg;
}

void save_planner_config(const PlannerConfig& cfg, const std::string& path) {
  json j;
  j["profile"] = cfg.profile;
  j["mode"] = to_string(cfg.mode);
  j["horizon"] = cfg.horizon;
  j["ts"] = cfg.ts;
  j["chain_soft_tol"] = cfg.chain_soft_tol;
  j["weights"] = {
      {"R", std::vector<double>(cfg.weights.R.data(), cfg.weights.R.data() + kSystemDof)},
      {"W", std::vector<double>(cfg.weights.W.data(), cfg.weights.W.data() + kSystemDof)},
      {"pt_terminal", {{"P_e", cfg.weights.pt_terminal.P_e}, {"O_e", cfg.weights.pt_terminal.O_e}}},
      {"at_terminal",
       {{"P_e_max", cfg.weights.at_terminal.P_e_max},
        {"P_e_min", cfg.weights.at_terminal.P_e_min},
        {"O_e_max", cfg.weights.at_terminal.O_e_max},
        {"O_e_min", cfg.weights.at_terminal.O_e_min}}},
      {"at_stage",
       {{"Q_pos_max", cfg.weights.at_stage.Q_pos_max},
        {"Q_pos_min", cfg.weights.at_stage.Q_pos_min},
        {"Q_ori_max", cfg.weights.at_stage.Q_ori_max},
        {"Q_ori_min", cfg.weights.at_stage.Q_ori_min}}},
      {"eps_pos", cfg.weights.eps_pos},
      {"eps_ori", cfg.weights.eps_ori}};
  j["solver"] = {{"tol_kkt", cfg.solve.solver.tol_kkt},
                 {"tol_eq", cfg.solve.solver.tol_eq},
                 {"max_outer", cfg.solve.solver.max_outer},
                 {"max_inner", cfg.solve.solver.max_inner},
                 {"rho0", cfg.solve.solver.rho0},
                 {"rho_scale", cfg.solve.solver.rho_scale},
                 {"eq_improve", cfg.solve.solver.eq_improve},
                 {"lbfgs_memory", cfg.solve.solver.lbfgs_memory},
                 {"state_bound_weight", cfg.solve.state_bound_weight},
                 {"state_bound_tol", cfg.solve.state_bound_tol},
                 {"penalty_retries", cfg.solve.penalty_retries},
                 {"penalty_scale", cfg.solve.penalty_scale}};
  j["safe_zone"] = {{"min", {cfg.safe_zone.min_corner(0), cfg.safe_zone.min_corner(1), cfg.safe_zone.min_corner(2)}},
                    {"max", {cfg.safe_zone.max_corner(0), cfg.safe_zone.max_corner(1), cfg.safe_zone.max_corner(2)}}};
  j["targeting"] = {{"v_min_impact", cfg.targeting.v_min_impact},
                    {"t_lock", cfg.targeting.t_lock},
                    {"opening_axis_world_up", cfg.targeting.opening_axis_world_up},
                    {"dt_pred", cfg.targeting.dt_pred},
                    {"pred_horizon", cfg.targeting.pred_horizon}};
  j["filter"] = {{"dt", cfg.filter.dt},
                 {"gravity", {cfg.filter.gravity(0), cfg.filter.gravity(1), cfg.filter.gravity(2)}},
                 {"process_noise_accel", cfg.filter.process_noise_accel},
                 {"measurement_noise", cfg.filter.measurement_noise},
                 {"init_pos_var", cfg.filter.init_pos_var},
                 {"init_vel_var", cfg.filter.init_vel_var},
                 {"floor_z", cfg.filter.floor_z}};
  j["sim"] = {{"r_catch", cfg.sim.r_catch},
              {"tracking", to_string(cfg.sim.tracking)},
              {"tau", cfg.sim.tau},
              {"episode_timeout", cfg.sim.episode_timeout},
              {"task_duration", cfg.sim.task_duration},
              {"task_min_duration", cfg.sim.task_min_duration},
              {"settle_pos_tol", cfg.sim.settle_pos_tol},
              {"settle_vel_tol", cfg.sim.settle_vel_tol},
              {"settle_cycles", cfg.sim.settle_cycles},
              {"meas_sigma", cfg.sim.meas_sigma},
              {"meas_rate", cfg.sim.meas_rate},
              {"min_separation", cfg.sim.min_separation},
              {"max_degraded_cycles", cfg.sim.max_degraded_cycles}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("planner config: cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

Scenario load_scenario(const std::string& path) {
  const json j = load_json_file(path, "scenario");
  Scenario s;
  s.name = j.value("name", std::string(""));
  const std::string kind = j.value("kind", std::string("throw"));
  if (kind == "throw") {
    s.kind = Scenario::Kind::throw_ball;
  } else if (kind == "pose_task") {
    s.kind = Scenario::Kind::pose_task;
  } else {
    fail("kind", "must be 'throw' or 'pose_task'");
  }
  if (auto it = j.find("initial_state"); it != j.end()) {
    s.initial_state.q = get_vec<kSystemDof>(*it, "q", Vec14::Zero(), "initial_state.");
    s.initial_state.qdot =
        get_vec<kSystemDof>(*it, "qdot", Vec14::Zero(), "initial_state.");
  } else {
    fail("initial_state", "missing");
  }
  if (auto it = j.find("safe_zone"); it != j.end()) {
    s.safe_zone = parse_safe_zone(*it, s.safe_zone, "safe_zone.");
  } else {
    fail("safe_zone", "missing");
  }
  s.safe_zone.validate();
  s.r_catch = get_num(j, "r_catch", s.r_catch, "");
  s.seed = j.value("seed", std::uint64_t(0));

  if (s.kind == Scenario::Kind::throw_ball) {
    auto it = j.find("ball");
    if (it == j.end()) fail("ball", "missing for throw scenario");
    s.ball_p0 = get_vec<3>(*it, "p0", Vec3::Zero(), "ball.");
    s.ball_v0 = get_vec<3>(*it, "v0", Vec3::Zero(), "ball.");
    if (auto n = j.find("noise"); n != j.end()) {
      s.meas_sigma = get_num(*n, "sigma", s.meas_sigma, "noise.");
      s.meas_rate = get_num(*n, "rate", s.meas_rate, "noise.");
    }
  } else {
    auto it = j.find("target_pose");
    if (it == j.end()) fail("target_pose", "missing for pose_task scenario");
    s.target_pose = parse_pose(*it, "target_pose.");
    if (auto sp = j.find("start_pose"); sp != j.end()) {
      s.start_pose = parse_pose(*sp, "start_pose.");
    }
    s.duration = get_num(j, "duration", s.duration, "");
  }
  return s;
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("scenario: cannot write '" + path + "'");
  out << scenario_to_json(scenario).dump(2) << "\n";
}

std::uint64_t scenario_hash(const Scenario& scenario) {
  const std::string canonical = scenario_to_json(scenario).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace catchmpc
