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

#ifndef LEGMPC_VERIFY_FINITE_DIFFERENCE_HPP_
#define LEGMPC_VERIFY_FINITE_DIFFERENCE_HPP_

// Central-difference oracles. These only call rollout, step and cost values,
// never the analytic derivative code they are meant to check.

#include <algorithm>
#include <limits>
#include <utility>

#include "legmpc/core/cost.hpp"

namespace legmpc::verify {

inline constexpr double kDefaultStep = 1e-6;

/// max |a - b| / max |b|, with a floor on the denominator.
inline double max_relative_error(const Matrix& a, const Matrix& b, double floor = 1e-12) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  if (a.size() == 0) return 0.0;
  const double scale = std::max(b.cwiseAbs().maxCoeff(), floor);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

/// dX/dU by central differences of rollout.
inline Matrix fd_sensitivity(const DynamicsModel& model, const Vector& x0, const Vector& U,
                             double h = kDefaultStep) {
  const ProblemDims d = model.dims();
  Matrix S(d.state_size(), d.decision_size());
  Vector Up = U, Um = U;
  for (int j = 0; j < d.decision_size(); ++j) {
    Up[j] = U[j] + h;
    Um[j] = U[j] - h;
    S.col(j) = (rollout(model, x0, Up) - rollout(model, x0, Um)) / (2.0 * h);
    Up[j] = Um[j] = U[j];
  }
  return S;
}

/// d J(X(U), U) / dU by central differences.
inline Vector fd_reduced_gradient(const DynamicsModel& model, const CostList& costs,
                                  const Vector& x0, const Vector& U, double h = kDefaultStep) {
  const ProblemDims d = model.dims();
  auto J = [&](const Vector& u) {
    const Vector X = rollout(model, x0, u);
    return total_cost(costs, CostInputs{d, x0, X, u});
  };
  Vector g(d.decision_size());
  Vector Up = U, Um = U;
  for (int j = 0; j < d.decision_size(); ++j) {
    Up[j] = U[j] + h;
    Um[j] = U[j] - h;
    g[j] = (J(Up) - J(Um)) / (2.0 * h);
    Up[j] = Um[j] = U[j];
  }
  return g;
}

/// Partial derivatives of the cost with X and U treated as independent.
inline std::pair<Vector, Vector> fd_cost_partials(const CostList& costs, const ProblemDims& d,
                                                  const Vector& x0, const Vector& X,
                                                  const Vector& U, double h = kDefaultStep) {
  auto J = [&](const Vector& x, const Vector& u) { return total_cost(costs, CostInputs{d, x0, x, u}); };
  Vector gx(X.size()), gu(U.size());
  Vector Xp = X, Xm = X;
  for (Eigen::Index i = 0; i < X.size(); ++i) {
    Xp[i] = X[i] + h;
    Xm[i] = X[i] - h;
    gx[i] = (J(Xp, U) - J(Xm, U)) / (2.0 * h);
    Xp[i] = Xm[i] = X[i];
  }
  Vector Up = U, Um = U;
  for (Eigen::Index i = 0; i < U.size(); ++i) {
    Up[i] = U[i] + h;
    Um[i] = U[i] - h;
    gu[i] = (J(X, Up) - J(X, Um)) / (2.0 * h);
    Up[i] = Um[i] = U[i];
  }
  return {gx, gu};
}

struct StepJacobianFd {
  Matrix Fx, Fu, Fp;
};

/// Jacobians of x_{k+1} = advance(k, x, u, p) by central differences.
inline StepJacobianFd fd_step_jacobians(const DynamicsModel& model, int k, const Vector& x,
                                        const Vector& u, const Vector& p, double h = kDefaultStep) {
  const ProblemDims d = model.dims();
  StepJacobianFd out{Matrix(d.n, d.n), Matrix(d.n, d.m), Matrix(d.n, d.p)};
  auto column = [&](Vector& v, int i, auto&& eval) {
    const double saved = v[i];
    v[i] = saved + h;
    const Vector plus = eval();
    v[i] = saved - h;
    const Vector minus = eval();
    v[i] = saved;
    return Vector((plus - minus) / (2.0 * h));
  };
  Vector xx = x, uu = u, pp = p;
  auto eval = [&] { return model.advance(k, xx, uu, pp); };
  for (int i = 0; i < d.n; ++i) out.Fx.col(i) = column(xx, i, eval);
  for (int i = 0; i < d.m; ++i) out.Fu.col(i) = column(uu, i, eval);
  for (int i = 0; i < d.p; ++i) out.Fp.col(i) = column(pp, i, eval);
  return out;
}

}  // namespace legmpc::verify

#endif  // LEGMPC_VERIFY_FINITE_DIFFERENCE_HPP_
