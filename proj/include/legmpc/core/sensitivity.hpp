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

#ifndef LEGMPC_CORE_SENSITIVITY_HPP_
#define LEGMPC_CORE_SENSITIVITY_HPP_

#include <Eigen/LU>

#include <exception>

#include "legmpc/core/dynamics_model.hpp"

namespace legmpc {

/// dX/dU, stored dense with one row block per state x_1..x_N.
struct SensitivityMatrix {
  ProblemDims dims;
  Matrix S;

  auto block(int k) const { return S.middleRows(dims.state_offset(k), dims.n); }
};

namespace detail {

inline Vector state_at(const ProblemDims& d, const Vector& x0, const Vector& X, int k) {
  return k == 0 ? x0 : Vector(X.segment(d.state_offset(k), d.n));
}

inline void check_problem_sizes(const ProblemDims& d, const Vector& x0, const Vector& U) {
  require_size(x0, d.n, "x0");
  require_size(U, d.decision_size(), "U");
}

}  // namespace detail

/// Forward evaluation of the dynamics, establishing X(U).
inline Vector rollout(const DynamicsModel& model, const Vector& x0, const Vector& U) {
  const ProblemDims d = model.dims();
  detail::check_problem_sizes(d, x0, U);
  for (Eigen::Index i = 0; i < U.size(); ++i) {
    if (!std::isfinite(U[i])) {
      const int k = i < d.param_offset() ? static_cast<int>(i / d.m) : 0;
      throw DivergedRolloutError(k, "non-finite decision variable at index " + std::to_string(i));
    }
  }
  const auto p = U.tail(d.p);
  Vector X(d.state_size());
  Vector x = x0;
  for (int k = 0; k < d.N; ++k) {
    Vector next;
    try {
      next = model.advance(k, x, U.segment(d.control_offset(k), d.m), p);
    } catch (const DivergedRolloutError&) {
      throw;
    } catch (const std::exception& e) {
      throw DivergedRolloutError(k, e.what());
    }
    if (!next.allFinite()) throw DivergedRolloutError(k, "non-finite state");
    X.segment(d.state_offset(k + 1), d.n) = next;
    x = std::move(next);
  }
  return X;
}

/// Stacked residual [G_0; ...; G_{N-1}].
inline Vector residuals(const DynamicsModel& model, const Vector& X, const Vector& U,
                        const Vector& x0) {
  const ProblemDims d = model.dims();
  detail::check_problem_sizes(d, x0, U);
  require_size(X, d.state_size(), "X");
  const auto p = U.tail(d.p);
  Vector G(d.state_size());
  for (int k = 0; k < d.N; ++k) {
    G.segment(k * d.n, d.n) =
        model.residual(k, detail::state_at(d, x0, X, k), X.segment(d.state_offset(k + 1), d.n),
                       U.segment(d.control_offset(k), d.m), p);
  }
  return G;
}

/**
 * S = -(dG/dX)^{-1} dG/dU by forward block substitution.
 *
 * dG/dX is block lower bidiagonal with E_k on the diagonal, so row block
 * k+1 follows from row block k as E_k S_{k+1} = -A_k S_k - [B_k | P_k].
 * Row block k only has nonzero control columns for u_0..u_{k-1}.
 */
inline SensitivityMatrix sensitivity(const DynamicsModel& model, const Vector& X, const Vector& U,
                                     const Vector& x0) {
  const ProblemDims d = model.dims();
  detail::check_problem_sizes(d, x0, U);
  require_size(X, d.state_size(), "X");
  const int n = d.n, m = d.m, p = d.p, pc = d.param_offset();
  const auto params = U.tail(p);

  SensitivityMatrix out{d, Matrix::Zero(d.state_size(), d.decision_size())};
  Matrix& S = out.S;

  if (model.is_explicit()) {
    const auto& explicit_model = static_cast<const ExplicitDynamicsModel&>(model);
    Matrix Fx, Fu, Fp;
    for (int k = 0; k < d.N; ++k) {
      const Vector xk = detail::state_at(d, x0, X, k);
      explicit_model.linearize(k, xk, U.segment(d.control_offset(k), m), params, Fx, Fu, Fp);
      const int row = d.state_offset(k + 1);
      if (k > 0) {
        const int prev = d.state_offset(k);
        S.block(row, 0, n, k * m).noalias() = Fx * S.block(prev, 0, n, k * m);
        S.block(row, pc, n, p).noalias() = Fx * S.block(prev, pc, n, p);
      }
      S.block(row, k * m, n, m) = Fu;
      S.block(row, pc, n, p) += Fp;
    }
    return out;
  }

  for (int k = 0; k < d.N; ++k) {
    const Vector xk = detail::state_at(d, x0, X, k);
    const StepJacobians jac = model.jacobians(k, xk, X.segment(d.state_offset(k + 1), n),
                                              U.segment(d.control_offset(k), m), params);
    Matrix rhs = Matrix::Zero(n, d.decision_size());
    if (k > 0) {
      const int prev = d.state_offset(k);
      rhs.leftCols(k * m).noalias() = -jac.A * S.block(prev, 0, n, k * m);
      rhs.rightCols(p).noalias() = -jac.A * S.block(prev, pc, n, p);
    }
    rhs.middleCols(k * m, m) -= jac.B;
    rhs.rightCols(p) -= jac.P;
    Eigen::FullPivLU<Matrix> lu(jac.E);
    if (!lu.isInvertible()) throw SingularDynamicsError(k, "dG_k/dx_{k+1} is not invertible");
    S.middleRows(d.state_offset(k + 1), n) = lu.solve(rhs);
  }
  return out;
}

}  // namespace legmpc

#endif  // LEGMPC_CORE_SENSITIVITY_HPP_
