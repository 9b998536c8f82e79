// Copyright 2026 The legmpc Authors
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

#ifndef LEGMPC_CORE_SOLVER_HPP_
#define LEGMPC_CORE_SOLVER_HPP_

#include <Eigen/Cholesky>

#include <chrono>
#include <limits>
#include <vector>

#include "legmpc/core/cost.hpp"

namespace legmpc {

struct SolverOptions {
  int max_iterations = 50;
  double gradient_tolerance = 1e-6;
  double step_tolerance = 1e-8;
  double levenberg_lambda = 1e-6;
  double line_search_shrink = 0.5;
  double line_search_min_step = 1e-8;
  double armijo_c = 1e-4;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const {
    auto fail = [](const char* f) { throw std::invalid_argument(std::string("solver.") + f); };
    if (max_iterations < 0) fail("max_iterations");
    if (!(gradient_tolerance >= 0.0)) fail("gradient_tolerance");
    if (!(step_tolerance >= 0.0)) fail("step_tolerance");
    if (!(levenberg_lambda >= 0.0)) fail("levenberg_lambda");
    if (!(line_search_shrink > 0.0 && line_search_shrink < 1.0)) fail("line_search_shrink");
    if (!(line_search_min_step > 0.0)) fail("line_search_min_step");
    if (!(armijo_c > 0.0 && armijo_c < 1.0)) fail("armijo_c");
  }
};

enum class SolveStatus { kGradientConverged, kStepConverged, kMaxIterations, kLineSearchFailed };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kGradientConverged: return "gradient";
    case SolveStatus::kStepConverged: return "step";
    case SolveStatus::kMaxIterations: return "max_iterations";
    case SolveStatus::kLineSearchFailed: return "line_search";
  }
  return "unknown";
}

struct SolveStats {
  int iterations = 0;
  double final_cost = 0.0;
  double final_gradient_norm = 0.0;
  std::vector<double> cost_history;
  double wall_time = 0.0;  ///< seconds
  bool converged = false;
  SolveStatus status = SolveStatus::kMaxIterations;
};

struct SolveResult {
  Vector U;
  Vector X;
  SolveStats stats;
};

/**
 * Sparse Gauss-Newton on the reduced objective J(X(U), U).
 *
 * Every iterate is feasible: X is re-derived from U by rollout. Entries of U
 * listed in `frozen` keep their initial value.
 */
inline SolveResult solve(const DynamicsModel& model, const CostList& costs, const Vector& x0,
                         const Vector& U_init, const SolverOptions& opts,
                         const std::vector<int>& frozen = {}) {
  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();
  opts.validate();
  const ProblemDims d = model.dims();

  SolveResult res{U_init, rollout(model, x0, U_init), {}};
  SolveStats& st = res.stats;
  auto cost_at = [&](const Vector& X, const Vector& U) {
    return total_cost(costs, CostInputs{d, x0, X, U});
  };
  auto masked_gradient = [&](const Vector& X, const Vector& U, const SensitivityMatrix& S,
                             CostDerivatives* keep) {
    CostDerivatives der = evaluate_cost_derivatives(costs, CostInputs{d, x0, X, U});
    Vector g = cost_gradient(der, S);
    for (int i : frozen) g[i] = 0.0;
    if (keep) *keep = std::move(der);
    return g;
  };

  double J = cost_at(res.X, res.U);
  st.cost_history.push_back(J);
  bool need_gradient = true;
  Vector g;

  for (;;) {
    const SensitivityMatrix S = sensitivity(model, res.X, res.U, x0);
    CostDerivatives der(d);
    g = masked_gradient(res.X, res.U, S, &der);
    need_gradient = false;
    const double gnorm = g.lpNorm<Eigen::Infinity>();
    if (gnorm < opts.gradient_tolerance) {
      st.converged = true;
      st.status = SolveStatus::kGradientConverged;
      break;
    }
    if (st.iterations >= opts.max_iterations) {
      st.status = SolveStatus::kMaxIterations;
      break;
    }

    Matrix H = gn_hessian(der, S);
    for (int i : frozen) {
      H.row(i).setZero();
      H.col(i).setZero();
      H(i, i) = 1.0;
    }
    Vector delta;
    double lambda = opts.levenberg_lambda;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Matrix A = H;
      A.diagonal().array() += lambda;
      Eigen::LLT<Matrix> llt(A);
      if (llt.info() == Eigen::Success) {
        delta = -llt.solve(g);
        if (delta.allFinite()) break;
      }
      delta.resize(0);
      lambda = std::max(lambda * 10.0, 1e-9);
    }
    if (delta.size() == 0) {
      st.status = SolveStatus::kLineSearchFailed;
      break;
    }

    const double slope = g.dot(delta);
    double alpha = 1.0;
    bool accepted = false;
    Vector U_trial, X_trial;
    double J_trial = J;
    while (slope < 0.0 && alpha >= opts.line_search_min_step) {
      U_trial = res.U + alpha * delta;
      try {
        X_trial = rollout(model, x0, U_trial);
        J_trial = cost_at(X_trial, U_trial);
        if (std::isfinite(J_trial) && J_trial <= J + opts.armijo_c * alpha * slope) {
          accepted = true;
          break;
        }
      } catch (const DivergedRolloutError&) {
      }
      alpha *= opts.line_search_shrink;
    }
    if (!accepted) {
      // A predicted decrease below the rounding level of J means U is
      // stationary to working precision.
      const double eps = std::numeric_limits<double>::epsilon();
      const bool stationary = -slope <= 16.0 * eps * std::max(std::abs(J), 1e-300);
      st.converged = stationary;
      st.status = stationary ? SolveStatus::kStepConverged : SolveStatus::kLineSearchFailed;
      break;
    }

    const double step_norm = alpha * delta.lpNorm<Eigen::Infinity>();
    res.U = std::move(U_trial);
    res.X = std::move(X_trial);
    J = J_trial;
    st.cost_history.push_back(J);
    ++st.iterations;
    need_gradient = true;
    if (step_norm < opts.step_tolerance) {
      st.converged = true;
      st.status = SolveStatus::kStepConverged;
      break;
    }
  }

  if (need_gradient) {
    const SensitivityMatrix S = sensitivity(model, res.X, res.U, x0);
    g = masked_gradient(res.X, res.U, S, nullptr);
  }
  st.final_cost = J;
  st.final_gradient_norm = g.lpNorm<Eigen::Infinity>();
  st.wall_time = std::chrono::duration<double>(Clock::now() - t_start).count();
  return res;
}

}  // namespace legmpc

#endif  // LEGMPC_CORE_SOLVER_HPP_
