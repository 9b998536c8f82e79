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

#ifndef LEGMPC_MODELS_IPM_HPP_
#define LEGMPC_MODELS_IPM_HPP_

// Variable-height inverted pendulum: a point mass on a massless telescoping
// rod whose foot is the center of pressure of the stance feet.

#include <span>
#include <stdexcept>
#include <vector>

#include "legmpc/core/dynamics_model.hpp"
#include "legmpc/models/contact_plan.hpp"

namespace legmpc {

class SingularPendulumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IpmState {
  Vector3 r;       ///< base position r_k
  Vector3 r_prev;  ///< r_{k-1}
};

struct IpmControl {
  double h_ddot = 0.0;
  std::vector<double> w;  ///< one weight per stance foot
};

/// Center of pressure sum_i w^i s^i.
inline Vector3 cop(std::span<const double> weights, std::span<const Vector3> footholds) {
  if (weights.size() != footholds.size()) {
    throw DimensionError("cop: weight and foothold counts differ");
  }
  if (footholds.empty()) throw std::invalid_argument("cop: empty stance set");
  Vector3 c = Vector3::Zero();
  for (std::size_t i = 0; i < weights.size(); ++i) c += weights[i] * footholds[i];
  return c;
}

/// r_ddot = (r - cop) (h_ddot + |g|) / r_z + g.
inline Vector3 ipm_accel(const Vector3& r, const IpmControl& u, std::span<const Vector3> stance,
                         const Vector3& gravity = Vector3(0.0, 0.0, -9.81)) {
  if (!(r.z() > 0.0)) throw SingularPendulumError("pendulum height must be positive");
  const Vector3 c = cop(u.w, stance);
  return (r - c) * ((u.h_ddot + gravity.norm()) / r.z()) + gravity;
}

inline IpmState ipm_step(const IpmState& s, const IpmControl& u, std::span<const Vector3> stance,
                         double dt, const Vector3& gravity = Vector3(0.0, 0.0, -9.81)) {
  const Vector3 a = ipm_accel(s.r, u, stance, gravity);
  return {2.0 * s.r - s.r_prev + a * dt * dt, s.r};
}

/**
 * IPM over a contact plan.
 *
 * State x_k = [r_k, r_{k-1}] (6). Control u_k = [h_ddot, w_FL, w_FR, w_RL,
 * w_RR] (5); weights of swing legs do not enter the dynamics. Parameters are
 * the 3D footholds of the plan, in foothold-index order.
 */
class IpmModel : public ExplicitDynamicsModel {
 public:
  static constexpr int kStateSize = 6;
  static constexpr int kControlSize = 1 + kLegCount;

  IpmModel(ContactPlan plan, double dt, Vector3 gravity = Vector3(0.0, 0.0, -9.81))
      : plan_(std::move(plan)), gravity_(std::move(gravity)) {
    dims_ = {kStateSize, kControlSize, 3 * plan_.foothold_count, plan_.horizon(), dt};
    if (!dims_.valid()) throw DimensionError("IpmModel: invalid dimensions");
  }

  ProblemDims dims() const override { return dims_; }
  const ContactPlan& plan() const { return plan_; }
  const Vector3& gravity() const { return gravity_; }

  Vector step(int k, const VecRef& x, const VecRef& u, const VecRef& p) const override {
    const Vector3 r = x.head<3>();
    const Vector3 a = accel(k, r, u, p);
    Vector next(kStateSize);
    next.head<3>() = 2.0 * r - x.segment<3>(3) + a * dims_.dt * dims_.dt;
    next.tail<3>() = r;
    return next;
  }

  Vector linearize(int k, const VecRef& x, const VecRef& u, const VecRef& p, Matrix& Fx, Matrix& Fu,
                   Matrix& Fp) const override {
    const double dt2 = dims_.dt * dims_.dt;
    const Vector3 r = x.head<3>();
    if (!(r.z() > 0.0)) throw SingularPendulumError("pendulum height must be positive");
    const double beta = u[0] + gravity_.norm();
    const Vector3 c = center_of_pressure(k, u, p);
    const Vector3 d = r - c;
    const double rz = r.z();

    Fx.setZero(kStateSize, kStateSize);
    Matrix3 da_dr = (beta / rz) * Matrix3::Identity();
    da_dr.col(2) -= d * (beta / (rz * rz));
    Fx.topLeftCorner<3, 3>() = 2.0 * Matrix3::Identity() + dt2 * da_dr;
    Fx.topRightCorner<3, 3>() = -Matrix3::Identity();
    Fx.bottomLeftCorner<3, 3>() = Matrix3::Identity();

    Fu.setZero(kStateSize, kControlSize);
    Fp.setZero(kStateSize, dims_.p);
    Fu.block<3, 1>(0, 0) = dt2 * d / rz;
    for (int leg = 0; leg < kLegCount; ++leg) {
      const int idx = plan_.steps[k][leg];
      if (idx == kSwing) continue;
      const Vector3 s = p.segment<3>(3 * idx);
      Fu.block<3, 1>(0, 1 + leg) = -dt2 * (beta / rz) * s;
      Fp.block<3, 3>(0, 3 * idx) -= dt2 * (u[1 + leg] * beta / rz) * Matrix3::Identity();
    }

    Vector next(kStateSize);
    next.head<3>() = 2.0 * r - x.segment<3>(3) + (d * (beta / rz) + gravity_) * dt2;
    next.tail<3>() = r;
    return next;
  }

  Vector3 center_of_pressure(int k, const VecRef& u, const VecRef& p) const {
    Vector3 c = Vector3::Zero();
    bool any = false;
    for (int leg = 0; leg < kLegCount; ++leg) {
      const int idx = plan_.steps[k][leg];
      if (idx == kSwing) continue;
      c += u[1 + leg] * p.segment<3>(3 * idx);
      any = true;
    }
    if (!any) throw std::invalid_argument("IpmModel: empty stance set at step " + std::to_string(k));
    return c;
  }

  Vector3 accel(int k, const Vector3& r, const VecRef& u, const VecRef& p) const {
    if (!(r.z() > 0.0)) throw SingularPendulumError("pendulum height must be positive");
    const Vector3 c = center_of_pressure(k, u, p);
    return (r - c) * ((u[0] + gravity_.norm()) / r.z()) + gravity_;
  }

 private:
  ContactPlan plan_;
  Vector3 gravity_;
  ProblemDims dims_;
};

}  // namespace legmpc

#endif  // LEGMPC_MODELS_IPM_HPP_
