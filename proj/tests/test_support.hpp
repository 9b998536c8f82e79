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

#ifndef LEGMPC_TESTS_TEST_SUPPORT_HPP_
#define LEGMPC_TESTS_TEST_SUPPORT_HPP_

#include <memory>
#include <string>

#include "legmpc/core/cost.hpp"

namespace legmpc::testing {

/// x_{k+1} = a x_k + b u_k, optionally plus c p for a single parameter.
class ScalarLinearModel : public ExplicitDynamicsModel {
 public:
  ScalarLinearModel(double a, double b, int N, double c = 0.0, bool with_param = false)
      : a_(a), b_(b), c_(c), dims_{1, 1, with_param ? 1 : 0, N, 0.1} {}

  ProblemDims dims() const override { return dims_; }

  Vector step(int, const VecRef& x, const VecRef& u, const VecRef& p) const override {
    Vector next(1);
    next[0] = a_ * x[0] + b_ * u[0] + (dims_.p ? c_ * p[0] : 0.0);
    return next;
  }

  Vector linearize(int k, const VecRef& x, const VecRef& u, const VecRef& p, Matrix& Fx,
                   Matrix& Fu, Matrix& Fp) const override {
    Fx = Matrix::Constant(1, 1, a_);
    Fu = Matrix::Constant(1, 1, b_);
    Fp = Matrix::Constant(1, dims_.p, c_);
    return step(k, x, u, p);
  }

 private:
  double a_, b_, c_;
  ProblemDims dims_;
};

/// G_k = e(x_{k+1}) - a x_k - b u_k - c p with e(y) = y + y^3 / 3, solved by
/// Newton iteration; `singular` makes dG/dx_{k+1} vanish at the origin.
class ImplicitCubicModel : public DynamicsModel {
 public:
  ImplicitCubicModel(double a, double b, double c, int N, bool singular = false)
      : a_(a), b_(b), c_(c), singular_(singular), dims_{1, 1, 1, N, 0.1} {}

  ProblemDims dims() const override { return dims_; }

  Vector residual(int, const VecRef& x, const VecRef& y, const VecRef& u,
                  const VecRef& p) const override {
    Vector g(1);
    g[0] = e(y[0]) - a_ * x[0] - b_ * u[0] - c_ * p[0];
    return g;
  }

  StepJacobians jacobians(int, const VecRef&, const VecRef& y, const VecRef&,
                          const VecRef&) const override {
    StepJacobians j;
    j.A = Matrix::Constant(1, 1, -a_);
    j.E = Matrix::Constant(1, 1, de(y[0]));
    j.B = Matrix::Constant(1, 1, -b_);
    j.P = Matrix::Constant(1, 1, -c_);
    return j;
  }

 private:
  double e(double y) const { return singular_ ? y * y * y / 3.0 : y + y * y * y / 3.0; }
  double de(double y) const { return singular_ ? y * y : 1.0 + y * y; }

  double a_, b_, c_;
  bool singular_;
  ProblemDims dims_;
};

/// 0.5 wx |X - X_target|^2 + 0.5 wu |U|^2.
class QuadraticCost : public CostTerm {
 public:
  QuadraticCost(Vector X_target, double wx, double wu)
      : target_(std::move(X_target)), wx_(wx), wu_(wu) {}

  std::string name() const override { return "quadratic"; }

  double value(const CostInputs& in) const override {
    return 0.5 * wx_ * (in.X - target_).squaredNorm() + 0.5 * wu_ * in.U.squaredNorm();
  }

  void accumulate(const CostInputs& in, CostDerivatives& out) const override {
    out.value += value(in);
    out.dX += wx_ * (in.X - target_);
    out.dU += wu_ * in.U;
    for (auto& H : out.Hxx) H.diagonal().array() += wx_;
    out.Huu.diagonal().array() += wu_;
  }

 private:
  Vector target_;
  double wx_, wu_;
};

/// Identically zero objective.
class ZeroCost : public CostTerm {
 public:
  std::string name() const override { return "zero"; }
  double value(const CostInputs&) const override { return 0.0; }
  void accumulate(const CostInputs&, CostDerivatives&) const override {}
};

}  // namespace legmpc::testing

#endif  // LEGMPC_TESTS_TEST_SUPPORT_HPP_
