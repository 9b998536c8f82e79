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

#ifndef LEGMPC_MODELS_SRBM_HPP_
#define LEGMPC_MODELS_SRBM_HPP_

// Single rigid body driven by ground reaction forces at the stance feet.
// Translation uses the position-pair Verlet update, orientation a forward
// Lie-group Euler step q_{k+1} = q_k * exp(w_{k+1} dt).

#include <Eigen/LU>

#include <span>
#include <vector>

#include "legmpc/core/dynamics_model.hpp"
#include "legmpc/models/contact_plan.hpp"
#include "legmpc/models/quaternion.hpp"
#include "legmpc/models/robot_params.hpp"

namespace legmpc {

struct SrbmState {
  Vector3 r;
  Vector3 r_prev;
  Vector4 q = quat::identity();
  Vector4 q_prev = quat::identity();
};

struct SrbmControl {
  std::vector<Vector3> f;  ///< one force per stance foot, world frame
};

inline Vector3 srbm_translational_accel(std::span<const Vector3> forces, const RobotParams& params) {
  Vector3 sum = Vector3::Zero();
  for (const auto& f : forces) sum += f;
  return sum / params.mass + params.gravity;
}

inline Vector3 srbm_angular_accel(const Vector3& r, const Vector4& q, const Vector3& omega_body,
                                  std::span<const Vector3> forces,
                                  std::span<const Vector3> footholds, const RobotParams& params) {
  if (forces.size() != footholds.size()) {
    throw DimensionError("srbm_angular_accel: force and foothold counts differ");
  }
  Vector3 torque = Vector3::Zero();
  for (std::size_t i = 0; i < forces.size(); ++i) torque += (footholds[i] - r).cross(forces[i]);
  const Matrix3& I = params.inertia_body;
  return I.ldlt().solve(quat::rotate_inverse(q, torque) - omega_body.cross(I * omega_body));
}

/// Body angular velocity encoded by two consecutive orientations.
inline Vector3 body_rate(const Vector4& q_prev, const Vector4& q, double dt) {
  return quat::log(quat::mul(quat::conj(q_prev), q)) / dt;
}

inline SrbmState srbm_step(const SrbmState& s, const SrbmControl& u,
                           std::span<const Vector3> footholds, double dt,
                           const RobotParams& params) {
  const Vector3 a = srbm_translational_accel(u.f, params);
  const Vector3 w = body_rate(s.q_prev, s.q, dt);
  const Vector3 w_dot = srbm_angular_accel(s.r, s.q, w, u.f, footholds, params);
  const Vector3 w_next = w + w_dot * dt;
  SrbmState out;
  out.r = 2.0 * s.r - s.r_prev + a * dt * dt;
  out.r_prev = s.r;
  out.q = quat::normalized(quat::mul(s.q, quat::exp(w_next * dt)));
  out.q_prev = s.q;
  return out;
}

/**
 * SRBM over a contact plan.
 *
 * State x_k = [r_k, r_{k-1}, q_k, q_{k-1}] (14). Control u_k holds one
 * world-frame force per leg, [f_FL, f_FR, f_RL, f_RR] (12); forces of swing
 * legs do not enter the dynamics.
 */
class SrbmModel : public ExplicitDynamicsModel {
 public:
  static constexpr int kStateSize = 14;
  static constexpr int kControlSize = 3 * kLegCount;

  SrbmModel(ContactPlan plan, double dt, const RobotParams& params)
      : plan_(std::move(plan)),
        params_(params),
        inertia_inv_(params.inertia_body.inverse()) {
    dims_ = {kStateSize, kControlSize, 3 * plan_.foothold_count, plan_.horizon(), dt};
    if (!dims_.valid()) throw DimensionError("SrbmModel: invalid dimensions");
  }

  ProblemDims dims() const override { return dims_; }
  const ContactPlan& plan() const { return plan_; }
  const RobotParams& params() const { return params_; }

  Vector step(int k, const VecRef& x, const VecRef& u, const VecRef& p) const override {
    Matrix unused;
    return evaluate(k, x, u, p, false, unused, unused, unused);
  }

  Vector linearize(int k, const VecRef& x, const VecRef& u, const VecRef& p, Matrix& Fx, Matrix& Fu,
                   Matrix& Fp) const override {
    return evaluate(k, x, u, p, true, Fx, Fu, Fp);
  }

 private:
  Vector evaluate(int k, const VecRef& x, const VecRef& u, const VecRef& p, bool want_jacobians,
                  Matrix& Fx, Matrix& Fu, Matrix& Fp) const {
    using quat::Mat34;
    using quat::Mat4;
    using quat::Mat43;
    const double dt = dims_.dt;
    const Vector3 r = x.segment<3>(0);
    const Vector3 r_prev = x.segment<3>(3);
    const Vector4 q = x.segment<4>(6);
    const Vector4 q_prev = x.segment<4>(10);
    const Matrix3& I = params_.inertia_body;

    Vector3 force_sum = Vector3::Zero();
    Vector3 torque = Vector3::Zero();
    for (int leg = 0; leg < kLegCount; ++leg) {
      const int idx = plan_.steps[k][leg];
      if (idx == kSwing) continue;
      const Vector3 f = u.segment<3>(3 * leg);
      force_sum += f;
      torque += (p.segment<3>(3 * idx) - r).cross(f);
    }

    const Mat4 L_conj_prev = quat::left(quat::conj(q_prev));
    const Vector4 dq = L_conj_prev * q;
    const Vector3 w = quat::log(dq) / dt;
    const Vector3 Iw = I * w;
    const Vector3 w_dot = inertia_inv_ * (quat::rotate_inverse(q, torque) - w.cross(Iw));
    const Vector3 w_next = w + dt * w_dot;
    const Vector3 v = dt * w_next;
    const Vector4 e = quat::exp(v);
    const Vector4 q_raw = quat::left(q) * e;
    const Vector4 q_next = q_raw / q_raw.norm();

    Vector next(kStateSize);
    next.segment<3>(0) = 2.0 * r - r_prev + (force_sum / params_.mass + params_.gravity) * dt * dt;
    next.segment<3>(3) = r;
    next.segment<4>(6) = q_next;
    next.segment<4>(10) = q;
    if (!want_jacobians) return next;

    const Matrix3 Rt = quat::rotation(q).transpose();
    const Mat34 dlog = quat::log_jacobian(dq) / dt;
    const Mat34 dw_dq = dlog * L_conj_prev;
    const Mat34 dw_dqp = dlog * quat::right(q) * quat::conj_matrix();
    const Matrix3 dwdot_dw = -inertia_inv_ * (quat::skew(w) * I - quat::skew(Iw));
    const Mat34 dwdot_dq = inertia_inv_ * quat::rotate_inverse_jacobian(q, torque);
    const Matrix3 M = inertia_inv_ * Rt;  // body-frame torque map

    // Chain through w_next -> v -> e -> q_raw -> q_next.
    const Mat4 Nq = quat::normalize_jacobian(q_raw);
    const Mat43 G = Nq * quat::left(q) * quat::exp_jacobian(v) * dt;  // d q_next / d w_next

    const Mat34 dwn_dq = dw_dq + dt * (dwdot_dw * dw_dq + dwdot_dq);
    const Mat34 dwn_dqp = (Matrix3::Identity() + dt * dwdot_dw) * dw_dqp;

    Fx.setZero(kStateSize, kStateSize);
    Fx.block<3, 3>(0, 0) = 2.0 * Matrix3::Identity();
    Fx.block<3, 3>(0, 3) = -Matrix3::Identity();
    Fx.block<3, 3>(3, 0) = Matrix3::Identity();
    Fx.block<4, 4>(6, 6) = Nq * quat::right(e) + G * dwn_dq;
    Fx.block<4, 4>(6, 10) = G * dwn_dqp;
    Fx.block<4, 4>(10, 6) = Mat4::Identity();

    Fu.setZero(kStateSize, kControlSize);
    Fp.setZero(kStateSize, dims_.p);
    Matrix3 dtorque_dr = Matrix3::Zero();
    for (int leg = 0; leg < kLegCount; ++leg) {
      const int idx = plan_.steps[k][leg];
      if (idx == kSwing) continue;
      const Vector3 f = u.segment<3>(3 * leg);
      const Vector3 s = p.segment<3>(3 * idx);
      dtorque_dr += quat::skew(f);
      Fu.block<3, 3>(0, 3 * leg) = (dt * dt / params_.mass) * Matrix3::Identity();
      Fu.block<4, 3>(6, 3 * leg) = G * (dt * M * quat::skew(s - r));
      Fp.block<4, 3>(6, 3 * idx) += G * (-dt * M * quat::skew(f));
    }
    Fx.block<4, 3>(6, 0) = G * (dt * M * dtorque_dr);
    return next;
  }

  ContactPlan plan_;
  RobotParams params_;
  Matrix3 inertia_inv_;
  ProblemDims dims_;
};

}  // namespace legmpc

#endif  // LEGMPC_MODELS_SRBM_HPP_
