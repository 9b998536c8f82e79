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

#ifndef LEGMPC_CORE_COST_HPP_
#define LEGMPC_CORE_COST_HPP_

#include <memory>
#include <string>
#include <vector>

#include "legmpc/core/sensitivity.hpp"

namespace legmpc {

struct CostInputs {
  const ProblemDims& dims;
  const Vector& x0;
  const Vector& X;
  const Vector& U;

  auto state(int k) const { return X.segment(dims.state_offset(k), dims.n); }
  auto control(int k) const { return U.segment(dims.control_offset(k), dims.m); }
  auto params() const { return U.tail(dims.p); }
};

/**
 * Partial derivatives of the objective with respect to X and U.
 *
 * State curvature is stored per step in `Hxx` (block k-1 belongs to x_k);
 * terms coupling different steps go in `Hxx_dense`. `Hxx_dense` and `Hxu`
 * stay empty unless a term writes to them.
 */
struct CostDerivatives {
  double value = 0.0;
  Vector dX;
  Vector dU;
  std::vector<Matrix> Hxx;
  Matrix Hxx_dense;
  Matrix Hxu;
  Matrix Huu;

  explicit CostDerivatives(const ProblemDims& d)
      : dX(Vector::Zero(d.state_size())),
        dU(Vector::Zero(d.decision_size())),
        Hxx(d.N, Matrix::Zero(d.n, d.n)),
        Huu(Matrix::Zero(d.decision_size(), d.decision_size())),
        dims_(d) {}

  const ProblemDims& dims() const { return dims_; }

  auto grad_state(int k) { return dX.segment(dims_.state_offset(k), dims_.n); }
  Matrix& hess_state(int k) { return Hxx[k - 1]; }

  Matrix& dense_state_hessian() {
    if (Hxx_dense.size() == 0) Hxx_dense.setZero(dims_.state_size(), dims_.state_size());
    return Hxx_dense;
  }
  Matrix& cross_hessian() {
    if (Hxu.size() == 0) Hxu.setZero(dims_.state_size(), dims_.decision_size());
    return Hxu;
  }

 private:
  ProblemDims dims_;
};

/// Additive objective contribution J_i(X, U).
///
/// `accumulate` adds the value, the gradients and a positive semi-definite
/// curvature model (the exact Hessian for least-squares terms).
class CostTerm {
 public:
  virtual ~CostTerm() = default;
  virtual std::string name() const = 0;
  virtual double value(const CostInputs& in) const = 0;
  virtual void accumulate(const CostInputs& in, CostDerivatives& out) const = 0;
};

using CostList = std::vector<std::shared_ptr<const CostTerm>>;

inline double total_cost(const CostList& costs, const CostInputs& in) {
  double J = 0.0;
  for (const auto& c : costs) J += c->value(in);
  return J;
}

inline CostDerivatives evaluate_cost_derivatives(const CostList& costs, const CostInputs& in) {
  CostDerivatives out(in.dims);
  for (const auto& c : costs) c->accumulate(in, out);
  return out;
}

/// dJ/dU = dJ/dX S + dJ/dU (as a column vector).
inline Vector cost_gradient(const CostDerivatives& d, const SensitivityMatrix& S) {
  Vector g = d.dU;
  g.noalias() += S.S.transpose() * d.dX;
  return g;
}

inline Vector cost_gradient(const CostList& costs, const Vector& X, const Vector& U,
                            const SensitivityMatrix& S, const Vector& x0) {
  const CostInputs in{S.dims, x0, X, U};
  return cost_gradient(evaluate_cost_derivatives(costs, in), S);
}

/// Generalized Gauss-Newton matrix
/// S^T Jxx S + S^T Jxu + Jux S + Juu, symmetric by construction.
inline Matrix gn_hessian(const CostDerivatives& d, const SensitivityMatrix& sens) {
  const ProblemDims& dims = sens.dims;
  const int m = dims.m, p = dims.p, pc = dims.param_offset();
  const Matrix& S = sens.S;
  Matrix H = d.Huu;

  Matrix HL, HR;
  for (int k = 1; k <= dims.N; ++k) {
    const Matrix& Hk = d.Hxx[k - 1];
    if (Hk.isZero(0.0)) continue;
    const auto Sk = sens.block(k);
    const int cols = k * m;
    const auto L = Sk.leftCols(cols);
    const auto R = Sk.rightCols(p);
    HL.noalias() = Hk * L;
    HR.noalias() = Hk * R;
    H.topLeftCorner(cols, cols).noalias() += L.transpose() * HL;
    H.block(0, pc, cols, p).noalias() += L.transpose() * HR;
    H.block(pc, 0, p, cols).noalias() += R.transpose() * HL;
    H.block(pc, pc, p, p).noalias() += R.transpose() * HR;
  }
  if (d.Hxx_dense.size() != 0) H.noalias() += S.transpose() * (d.Hxx_dense * S);
  if (d.Hxu.size() != 0) {
    const Matrix cross = S.transpose() * d.Hxu;
    H += cross + cross.transpose();
  }
  return 0.5 * (H + H.transpose());
}

inline Matrix gn_hessian(const CostList& costs, const Vector& X, const Vector& U,
                         const SensitivityMatrix& S, const Vector& x0) {
  const CostInputs in{S.dims, x0, X, U};
  return gn_hessian(evaluate_cost_derivatives(costs, in), S);
}

}  // namespace legmpc

#endif  // LEGMPC_CORE_COST_HPP_
