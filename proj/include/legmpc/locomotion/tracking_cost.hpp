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

#ifndef LEGMPC_LOCOMOTION_TRACKING_COST_HPP_
#define LEGMPC_LOCOMOTION_TRACKING_COST_HPP_

#include <algorithm>

#include "legmpc/core/cost.hpp"
#include "legmpc/locomotion/references.hpp"
#include "legmpc/models/contact_plan.hpp"

namespace legmpc {

/// Table of cost weights; defaults are the published NMPC values.
struct CostWeights {
  double K1 = 1.0;    ///< base velocity tracking
  double K2 = 1.0;    ///< base height tracking
  double K3 = 0.2;    ///< relative foothold regularization
  double K4 = 100.0;  ///< IPM weight sum
  double K5 = 1.0;    ///< IPM weight non-negativity
  double K6 = 1.0;    ///< SRBM orientation tracking
  double K7 = 1.0;    ///< SRBM vertical force non-negativity
  double K8 = 1.0;    ///< gap avoidance
  double K9 = 0.1;    ///< stepping-stone attraction
  double K10 = 0.041; ///< stepping-stone Gaussian width, m
  double K11 = 1.0;   ///< collision avoidance
};

/**
 * Base and foothold tracking for one robot. With r_k, h_k = r_k,z:
 *
 *   K1 sum_{k<N} |(r_{k+1} - r_k) - (r_ref_{k+1} - r_ref_k)|^2
 * + K2 sum_{k<N} (h_{k+1} - h_ref_{k+1})^2
 * + K3 sum_i sum_{j=i+1}^{min(F, i+3)} |(s_i - s_j) - (s_ref_i - s_ref_j)|^2
 *
 * The state stores [r_k, r_{k-1}, ...] so each velocity difference lives in
 * a single state block x_{k+1}.
 */
class TrackingCost : public CostTerm {
 public:
  static constexpr int kWindow = 3;

  TrackingCost(ReferencePlan plan, RobotLayout layout, double K1 = 1.0, double K2 = 1.0,
               double K3 = 0.2)
      : plan_(std::move(plan)), layout_(layout), K1_(K1), K2_(K2), K3_(K3) {}

  std::string name() const override { return "tracking"; }

  double value(const CostInputs& in) const override {
    double J = 0.0;
    for (int k = 0; k < in.dims.N; ++k) {
      J += K1_ * velocity_error(in, k).squaredNorm();
      const double e = height_error(in, k);
      J += K2_ * e * e;
    }
    const int F = foothold_count();
    for (int i = 0; i < F; ++i) {
      for (int j = i + 1; j <= std::min(F - 1, i + kWindow); ++j) {
        J += K3_ * pair_error(in, i, j).squaredNorm();
      }
    }
    return J;
  }

  void accumulate(const CostInputs& in, CostDerivatives& out) const override {
    const int so = layout_.state_offset;
    for (int k = 0; k < in.dims.N; ++k) {
      const Vector3 ev = velocity_error(in, k);
      const double eh = height_error(in, k);
      out.value += K1_ * ev.squaredNorm() + K2_ * eh * eh;
      auto g = out.grad_state(k + 1);
      g.segment<3>(so) += 2.0 * K1_ * ev;
      g.segment<3>(so + 3) -= 2.0 * K1_ * ev;
      g[so + 2] += 2.0 * K2_ * eh;
      Matrix& H = out.hess_state(k + 1);
      const Matrix3 I = 2.0 * K1_ * Matrix3::Identity();
      H.block<3, 3>(so, so) += I;
      H.block<3, 3>(so, so + 3) -= I;
      H.block<3, 3>(so + 3, so) -= I;
      H.block<3, 3>(so + 3, so + 3) += I;
      H(so + 2, so + 2) += 2.0 * K2_;
    }
    const int F = foothold_count();
    const int base = in.dims.param_offset() + layout_.param_offset;
    const Matrix3 I = 2.0 * K3_ * Matrix3::Identity();
    for (int i = 0; i < F; ++i) {
      for (int j = i + 1; j <= std::min(F - 1, i + kWindow); ++j) {
        const Vector3 e = pair_error(in, i, j);
        out.value += K3_ * e.squaredNorm();
        const int a = base + 3 * i, b = base + 3 * j;
        out.dU.segment<3>(a) += 2.0 * K3_ * e;
        out.dU.segment<3>(b) -= 2.0 * K3_ * e;
        out.Huu.block<3, 3>(a, a) += I;
        out.Huu.block<3, 3>(a, b) -= I;
        out.Huu.block<3, 3>(b, a) -= I;
        out.Huu.block<3, 3>(b, b) += I;
      }
    }
  }

  const ReferencePlan& plan() const { return plan_; }

 private:
  int foothold_count() const { return static_cast<int>(plan_.s_ref.size()); }

  Vector3 velocity_error(const CostInputs& in, int k) const {
    const auto x = in.state(k + 1);
    const Vector3 dr = x.segment<3>(layout_.state_offset) - x.segment<3>(layout_.state_offset + 3);
    return dr - (plan_.r_ref[k + 1] - plan_.r_ref[k]);
  }

  double height_error(const CostInputs& in, int k) const {
    return in.state(k + 1)[layout_.state_offset + 2] - plan_.h_ref[k + 1];
  }

  Vector3 pair_error(const CostInputs& in, int i, int j) const {
    const auto p = in.params();
    const Vector3 si = p.segment<3>(layout_.param_offset + 3 * i);
    const Vector3 sj = p.segment<3>(layout_.param_offset + 3 * j);
    return (si - sj) - (plan_.s_ref[i] - plan_.s_ref[j]);
  }

  ReferencePlan plan_;
  RobotLayout layout_;
  double K1_, K2_, K3_;
};

}  // namespace legmpc

#endif  // LEGMPC_LOCOMOTION_TRACKING_COST_HPP_
