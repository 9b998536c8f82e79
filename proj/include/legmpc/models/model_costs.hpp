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

#ifndef LEGMPC_MODELS_MODEL_COSTS_HPP_
#define LEGMPC_MODELS_MODEL_COSTS_HPP_

#include <vector>

#include "legmpc/core/cost.hpp"
#include "legmpc/models/contact_plan.hpp"
#include "legmpc/models/smooth_plus.hpp"

namespace legmpc {

/// Soft simplex constraint on the IPM stance weights:
/// sum_k K4/2 (1 - sum_i w_k^i)^2 + K5 sum_i S_{>=0}(w_k^i).
class IpmModelCost : public CostTerm {
 public:
  IpmModelCost(ContactPlan plan, RobotLayout layout, double k4 = 100.0, double k5 = 1.0,
               SmoothPlusParams sp = {})
      : plan_(std::move(plan)), layout_(layout), k4_(k4), k5_(k5), sp_(sp) {}

  std::string name() const override { return "ipm_model"; }

  double value(const CostInputs& in) const override {
    double J = 0.0;
    for (int k = 0; k < plan_.horizon(); ++k) {
      const auto u = in.control(k);
      double sum = 0.0;
      for (int leg = 0; leg < kLegCount; ++leg) {
        if (!plan_.in_stance(k, leg)) continue;
        const double w = u[weight_index(leg)];
        sum += w;
        J += k5_ * smooth_plus(w, sp_);
      }
      J += 0.5 * k4_ * (1.0 - sum) * (1.0 - sum);
    }
    return J;
  }

  void accumulate(const CostInputs& in, CostDerivatives& out) const override {
    const ProblemDims& d = in.dims;
    std::vector<int> idx;
    for (int k = 0; k < plan_.horizon(); ++k) {
      const auto u = in.control(k);
      idx.clear();
      double sum = 0.0;
      for (int leg = 0; leg < kLegCount; ++leg) {
        if (!plan_.in_stance(k, leg)) continue;
        const int j = d.control_offset(k) + weight_index(leg);
        idx.push_back(j);
        const double w = u[weight_index(leg)];
        sum += w;
        const SmoothPlusValue s = smooth_plus_eval(w, sp_);
        out.value += k5_ * s.value;
        out.dU[j] += k5_ * s.d1;
        out.Huu(j, j) += k5_ * s.d2;
      }
      const double res = 1.0 - sum;
      out.value += 0.5 * k4_ * res * res;
      for (int a : idx) {
        out.dU[a] -= k4_ * res;
        for (int b : idx) out.Huu(a, b) += k4_;
      }
    }
  }

 private:
  int weight_index(int leg) const { return layout_.control_offset + 1 + leg; }

  ContactPlan plan_;
  RobotLayout layout_;
  double k4_, k5_;
  SmoothPlusParams sp_;
};

/**
 * SRBM orientation tracking and unilateral vertical forces:
 * sum_{k=0}^{N-1} K6 (1 - |q_k . q_ref_k|) + K7 sum_i S_{>=0}(f_z,k^i).
 *
 * The orientation curvature uses the equivalent least-squares form
 * K6/2 |q_k - sign(c) q_ref_k|^2, which agrees with the value on unit
 * quaternions.
 */
class SrbmModelCost : public CostTerm {
 public:
  static constexpr int kQuatOffset = 6;

  SrbmModelCost(ContactPlan plan, RobotLayout layout, std::vector<Vector4> q_ref, double k6 = 1.0,
                double k7 = 1.0, SmoothPlusParams sp = {})
      : plan_(std::move(plan)),
        layout_(layout),
        q_ref_(std::move(q_ref)),
        k6_(k6),
        k7_(k7),
        sp_(sp) {
    if (static_cast<int>(q_ref_.size()) < plan_.horizon()) {
      throw DimensionError("SrbmModelCost: q_ref shorter than the horizon");
    }
  }

  std::string name() const override { return "srbm_model"; }

  double value(const CostInputs& in) const override {
    double J = 0.0;
    for (int k = 0; k < plan_.horizon(); ++k) {
      J += k6_ * (1.0 - std::abs(quat_at(in, k).dot(q_ref_[k])));
      J += force_penalty(in, k, nullptr, nullptr);
    }
    return J;
  }

  void accumulate(const CostInputs& in, CostDerivatives& out) const override {
    for (int k = 0; k < plan_.horizon(); ++k) {
      const Vector4 q = quat_at(in, k);
      const double c = q.dot(q_ref_[k]);
      out.value += k6_ * (1.0 - std::abs(c));
      if (k > 0) {
        const double sign = c >= 0.0 ? 1.0 : -1.0;
        out.grad_state(k).segment<4>(layout_.state_offset + kQuatOffset) -= k6_ * sign * q_ref_[k];
        out.hess_state(k).block<4, 4>(layout_.state_offset + kQuatOffset,
                                       layout_.state_offset + kQuatOffset) +=
            k6_ * Eigen::Matrix4d::Identity();
      }
      out.value += force_penalty(in, k, &out.dU, &out.Huu);
    }
  }

 private:
  Vector4 quat_at(const CostInputs& in, int k) const {
    const int off = layout_.state_offset + kQuatOffset;
    return k == 0 ? Vector4(in.x0.segment<4>(off)) : Vector4(in.state(k).segment<4>(off));
  }

  double force_penalty(const CostInputs& in, int k, Vector* grad, Matrix* hess) const {
    double J = 0.0;
    for (int leg = 0; leg < kLegCount; ++leg) {
      if (!plan_.in_stance(k, leg)) continue;
      const int j = in.dims.control_offset(k) + layout_.control_offset + 3 * leg + 2;
      const SmoothPlusValue s = smooth_plus_eval(in.U[j], sp_);
      J += k7_ * s.value;
      if (grad) (*grad)[j] += k7_ * s.d1;
      if (hess) (*hess)(j, j) += k7_ * s.d2;
    }
    return J;
  }

  ContactPlan plan_;
  RobotLayout layout_;
  std::vector<Vector4> q_ref_;
  double k6_, k7_;
  SmoothPlusParams sp_;
};

}  // namespace legmpc

#endif  // LEGMPC_MODELS_MODEL_COSTS_HPP_
