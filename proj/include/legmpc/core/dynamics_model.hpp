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

#ifndef LEGMPC_CORE_DYNAMICS_MODEL_HPP_
#define LEGMPC_CORE_DYNAMICS_MODEL_HPP_

#include <Eigen/LU>

#include <cmath>
#include <memory>
#include <vector>

#include "legmpc/core/types.hpp"

namespace legmpc {

using VecRef = Eigen::Ref<const Vector>;

/**
 * Discrete dynamics in implicit form G_k(x_k, x_{k+1}, u_k, p) = 0.
 *
 * Implementations must be pure: the same arguments give bitwise identical
 * results, so a model instance can be shared between threads.
 */
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual ProblemDims dims() const = 0;

  /// True when G_k = x_{k+1} - g_k(x_k, u_k, p), i.e. E_k is the identity.
  virtual bool is_explicit() const { return false; }

  virtual Vector residual(int k, const VecRef& x, const VecRef& x_next, const VecRef& u,
                          const VecRef& p) const = 0;

  virtual StepJacobians jacobians(int k, const VecRef& x, const VecRef& x_next, const VecRef& u,
                                  const VecRef& p) const = 0;

  /// Solves G_k = 0 for x_{k+1}. The default is a Newton iteration on the
  /// residual started from x_k; explicit models override it with g_k.
  virtual Vector advance(int k, const VecRef& x, const VecRef& u, const VecRef& p) const {
    Vector next = x;
    for (int it = 0; it < 50; ++it) {
      const Vector g = residual(k, x, next, u, p);
      if (!g.allFinite()) break;
      if (g.lpNorm<Eigen::Infinity>() <= 1e-13 * (1.0 + next.lpNorm<Eigen::Infinity>())) {
        return next;
      }
      const StepJacobians jac = jacobians(k, x, next, u, p);
      Eigen::FullPivLU<Matrix> lu(jac.E);
      if (!lu.isInvertible()) throw SingularDynamicsError(k, "dG/dx_{k+1} is not invertible");
      next -= lu.solve(g);
    }
    return next;
  }
};

/**
 * Dynamics with an explicit step map x_{k+1} = g_k(x_k, u_k, p).
 *
 * Derived classes provide `step` and `linearize`; the implicit interface is
 * derived from them.
 */
class ExplicitDynamicsModel : public DynamicsModel {
 public:
  bool is_explicit() const final { return true; }

  virtual Vector step(int k, const VecRef& x, const VecRef& u, const VecRef& p) const = 0;

  /// Returns g_k and writes dg/dx (n x n), dg/du (n x m) and dg/dp (n x p).
  virtual Vector linearize(int k, const VecRef& x, const VecRef& u, const VecRef& p, Matrix& Fx,
                           Matrix& Fu, Matrix& Fp) const = 0;

  Vector residual(int k, const VecRef& x, const VecRef& x_next, const VecRef& u,
                  const VecRef& p) const override {
    return x_next - step(k, x, u, p);
  }

  StepJacobians jacobians(int k, const VecRef& x, const VecRef& /*x_next*/, const VecRef& u,
                          const VecRef& p) const override {
    StepJacobians jac;
    linearize(k, x, u, p, jac.A, jac.B, jac.P);
    jac.A = -jac.A;
    jac.B = -jac.B;
    jac.P = -jac.P;
    jac.E = Matrix::Identity(dims().n, dims().n);
    return jac;
  }

  Vector advance(int k, const VecRef& x, const VecRef& u, const VecRef& p) const override {
    return step(k, x, u, p);
  }
};

/**
 * Block-diagonal product of several explicit models sharing N and dt.
 *
 * Per step, the composite state is [x^0, x^1, ...] and the composite control
 * is [u^0, u^1, ...]; the parameter block is [p^0, p^1, ...].
 */
class CompositeModel : public ExplicitDynamicsModel {
 public:
  struct Slice {
    int state_offset = 0;
    int control_offset = 0;
    int param_offset = 0;
  };

  explicit CompositeModel(std::vector<std::shared_ptr<const ExplicitDynamicsModel>> parts)
      : parts_(std::move(parts)) {
    if (parts_.empty()) throw DimensionError("CompositeModel needs at least one part");
    dims_ = parts_.front()->dims();
    dims_.n = dims_.m = dims_.p = 0;
    for (const auto& part : parts_) {
      const ProblemDims d = part->dims();
      if (d.N != dims_.N || d.dt != dims_.dt) {
        throw DimensionError("CompositeModel parts must share horizon and dt");
      }
      slices_.push_back({dims_.n, dims_.m, dims_.p});
      dims_.n += d.n;
      dims_.m += d.m;
      dims_.p += d.p;
    }
  }

  ProblemDims dims() const override { return dims_; }
  const std::vector<Slice>& slices() const { return slices_; }
  const ExplicitDynamicsModel& part(int i) const { return *parts_[i]; }
  int part_count() const { return static_cast<int>(parts_.size()); }

  Vector step(int k, const VecRef& x, const VecRef& u, const VecRef& p) const override {
    Vector next(dims_.n);
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const ProblemDims d = parts_[i]->dims();
      const Slice& s = slices_[i];
      next.segment(s.state_offset, d.n) =
          parts_[i]->step(k, x.segment(s.state_offset, d.n), u.segment(s.control_offset, d.m),
                          p.segment(s.param_offset, d.p));
    }
    return next;
  }

  Vector linearize(int k, const VecRef& x, const VecRef& u, const VecRef& p, Matrix& Fx, Matrix& Fu,
                   Matrix& Fp) const override {
    Fx.setZero(dims_.n, dims_.n);
    Fu.setZero(dims_.n, dims_.m);
    Fp.setZero(dims_.n, dims_.p);
    Vector next(dims_.n);
    Matrix fx, fu, fp;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const ProblemDims d = parts_[i]->dims();
      const Slice& s = slices_[i];
      next.segment(s.state_offset, d.n) = parts_[i]->linearize(
          k, x.segment(s.state_offset, d.n), u.segment(s.control_offset, d.m),
          p.segment(s.param_offset, d.p), fx, fu, fp);
      Fx.block(s.state_offset, s.state_offset, d.n, d.n) = fx;
      Fu.block(s.state_offset, s.control_offset, d.n, d.m) = fu;
      Fp.block(s.state_offset, s.param_offset, d.n, d.p) = fp;
    }
    return next;
  }

 private:
  std::vector<std::shared_ptr<const ExplicitDynamicsModel>> parts_;
  std::vector<Slice> slices_;
  ProblemDims dims_;
};

}  // namespace legmpc

#endif  // LEGMPC_CORE_DYNAMICS_MODEL_HPP_
