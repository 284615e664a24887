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

#include "catchmpc/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace catchmpc {

namespace {

VecX clamp_to_bounds(VecX x, const VecX& lower, const VecX& upper) {
  return x.cwiseMax(lower).cwiseMin(upper);
}

/// Two-loop recursion storage for the limited-memory quasi-Newton direction.
class LbfgsMemory {
 public:
  explicit LbfgsMemory(int capacity) : capacity_(capacity) {}

  void clear() { s_.clear(); y_.clear(); rho_.clear(); }

  void push(const VecX& s, const VecX& y) {
    const double sy = s.dot(y);
    if (!(sy > 1e-10 * s.norm() * y.norm())) return;  // curvature guard
    if (static_cast<int>(s_.size()) == capacity_) {
      s_.erase(s_.begin());
      y_.erase(y_.begin());
      rho_.erase(rho_.begin());
    }
    s_.push_back(s);
    y_.push_back(y);
    rho_.push_back(1.0 / sy);
  }

  /// Returns -H*g; falls back to -g when the memory is empty.
  VecX direction(const VecX& g) const {
    if (s_.empty()) return -g;
    const int k = static_cast<int>(s_.size());
    std::vector<double> alpha(k);
    VecX q = g;
    for (int i = k - 1; i >= 0; --i) {
      alpha[i] = rho_[i] * s_[i].dot(q);
      q -= alpha[i] * y_[i];
    }
    const double gamma = s_.back().dot(y_.back()) / y_.back().squaredNorm();
    q *= gamma;
    for (int i = 0; i < k; ++i) {
      const double beta = rho_[i] * y_[i].dot(q);
      q += (alpha[i] - beta) * s_[i];
    }
    return -q;
  }

 private:
  int capacity_;
  std::vector<VecX> s_, y_;
  std::vector<double> rho_;
};

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible_stationary: return "infeasible_stationary";
  }
  return "unknown";
}

std::pair<VecX, SolveReport> solve(const NlpSpec& spec, VecX x_init,
                                   const SolverOptions& opts) {
  const auto t_start = std::chrono::steady_clock::now();
  if (spec.dim <= 0 || !spec.objective) {
    throw std::invalid_argument("solve: spec.dim and objective are required");
  }
  if (spec.lower.size() != spec.dim || spec.upper.size() != spec.dim) {
    throw std::invalid_argument("solve: bounds must match spec.dim");
  }
  const int m = spec.eq_dim;
  if (m > 0 && (!spec.equality || !spec.equality_vjp)) {
    throw std::invalid_argument("solve: equality callbacks required when eq_dim > 0");
  }

  VecX x = clamp_to_bounds(std::move(x_init), spec.lower, spec.upper);
  VecX lambda = VecX::Zero(m);
  double rho = opts.rho0;

  VecX c(m), g(spec.dim), g_new(spec.dim);

  // Augmented Lagrangian L_A = f + lambda^T c + (rho/2) ||c||^2.
  auto eval = [&](const VecX& xq, VecX* grad) -> double {
    double value = spec.objective(xq, grad);
    if (m > 0) {
      spec.equality(xq, c);
      value += lambda.dot(c) + 0.5 * rho * c.squaredNorm();
      if (grad != nullptr) {
        const VecX v = lambda + rho * c;
        spec.equality_vjp(xq, v, *grad);
      }
    }
    return value;
  };

  auto projected_gradient_norm = [&](const VecX& xq, const VecX& grad) {
    return (xq - clamp_to_bounds(xq - grad, spec.lower, spec.upper))
        .cwiseAbs()
        .maxCoeff();
  };

  SolveReport report;
  double viol_prev = std::numeric_limits<double>::infinity();
  double kkt = std::numeric_limits<double>::infinity();

  const int n_outer = (m > 0) ? opts.max_outer : 1;
  int stalled_outers = 0;

  for (int outer = 0; outer < n_outer; ++outer) {
    report.outer_iterations = outer + 1;
    if (opts.outer_begin) opts.outer_begin(x);

    // --- Inner: projected quasi-Newton descent on L_A(.; lambda, rho).
    LbfgsMemory memory(opts.lbfgs_memory);
    double f = eval(x, &g);
    if (opts.iterate_observer) opts.iterate_observer(x);

    for (int inner = 0; inner < opts.max_inner; ++inner) {
      kkt = projected_gradient_norm(x, g);
      if (kkt <= opts.tol_kkt) break;

      VecX d = memory.direction(g);
      if (!(g.dot(d) < 0.0)) {
        memory.clear();
        d = -g;
      }

      bool accepted = false;
      for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
        double alpha = 1.0;
        for (int ls = 0; ls < opts.max_line_search; ++ls) {
          VecX x_trial = clamp_to_bounds(x + alpha * d, spec.lower, spec.upper);
          const VecX dx = x_trial - x;
          const double dir_deriv = g.dot(dx);
          if (dx.cwiseAbs().maxCoeff() == 0.0) break;
          const double f_trial = eval(x_trial, nullptr);
          if (f_trial <= f + opts.armijo_c1 * dir_deriv && dir_deriv < 0.0) {
            const double f_new = eval(x_trial, &g_new);
            memory.push(x_trial - x, g_new - g);
            x = std::move(x_trial);
            f = f_new;
            g = g_new;
            accepted = true;
            break;
          }
          alpha *= opts.backtrack;
        }
        if (!accepted && attempt == 0) {
          memory.clear();
          d = -g;  // steepest-descent retry
        }
      }

      report.inner_iterations += 1;
      if (!accepted) break;  // numerical floor reached
      if (opts.iterate_observer) opts.iterate_observer(x);
    }

    // --- Outer bookkeeping.
    kkt = projected_gradient_norm(x, g);
    if (m == 0) {
      report.max_violation = 0.0;
      report.kkt_residual = kkt;
      report.status = (kkt <= opts.tol_kkt) ? SolveStatus::converged
                                            : SolveStatus::max_iter;
      break;
    }

    spec.equality(x, c);
    const double viol = (m > 0 && c.size() > 0) ? c.cwiseAbs().maxCoeff() : 0.0;
    report.max_violation = viol;
    // grad L_A at x equals grad f + J^T (lambda + rho c): the KKT residual
    // at the first-order multiplier estimate.
    report.kkt_residual = kkt;

    if (viol <= opts.tol_eq && kkt <= opts.tol_kkt) {
      report.status = SolveStatus::converged;
      break;
    }

    lambda += rho * c;
    if (viol > opts.eq_improve * viol_prev) {
      if (rho >= opts.rho_max) {
        stalled_outers += 1;
        if (kkt <= opts.tol_kkt && stalled_outers >= 2) {
          report.status = SolveStatus::infeasible_stationary;
          break;
        }
      }
      rho = std::min(rho * opts.rho_scale, opts.rho_max);
    } else {
      stalled_outers = 0;
    }
    viol_prev = viol;
    report.status = SolveStatus::max_iter;
  }

  report.objective = spec.objective(x, nullptr);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return {std::move(x), report};
}

MatX warm_start_shift(const MatX& prev_u) {
  if (prev_u.cols() == 0) return prev_u;
  MatX shifted(prev_u.rows(), prev_u.cols());
  const Eigen::Index n = prev_u.cols();
  shifted.leftCols(n - 1) = prev_u.rightCols(n - 1);
  shifted.col(n - 1) = prev_u.col(n - 1);
  return shifted;
}

}  // namespace catchmpc
