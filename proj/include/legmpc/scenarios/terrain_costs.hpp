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

#ifndef LEGMPC_SCENARIOS_TERRAIN_COSTS_HPP_
#define LEGMPC_SCENARIOS_TERRAIN_COSTS_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "legmpc/core/cost.hpp"
#include "legmpc/locomotion/ocp_builder.hpp"
#include "legmpc/models/smooth_plus.hpp"

namespace legmpc {

inline constexpr double kKinkSmoothing = 1e-6;

struct GapSpec {
  double g_x = 0.0;         ///< gap center x, m
  double half_width = 0.0;  ///< g, m
};

struct StoneField {
  std::vector<Vector3> stones;
  double radius = 0.06;  ///< acceptance radius used by validation, m
};

struct MultiRobotSpec {
  int robot_a = 0;
  int robot_b = 1;
  double min_distance = 1.0;
};

/// Foothold blocks of every robot in a locomotion problem.
inline std::vector<FootholdBlock> all_footholds(const LocomotionOcp& ocp) { return ocp.footholds; }

/// K8 sum_gaps sum_i S_{>=g}(|s_x^i - g_x|), |.| smoothed.
class GapCost : public CostTerm {
 public:
  GapCost(std::vector<GapSpec> gaps, std::vector<FootholdBlock> footholds, double K8 = 1.0,
          double eps = 0.1)
      : gaps_(std::move(gaps)), footholds_(std::move(footholds)), K8_(K8), eps_(eps) {}

  std::string name() const override { return "gap"; }

  double value(const CostInputs& in) const override {
    double J = 0.0;
    visit(in, [&](int, const SmoothPlusValue& s, double) { J += K8_ * s.value; });
    return J;
  }

  void accumulate(const CostInputs& in, CostDerivatives& out) const override {
    visit(in, [&](int j, const SmoothPlusValue& s, double da) {
      out.value += K8_ * s.value;
      out.dU[j] += K8_ * s.d1 * da;
      out.Huu(j, j) += K8_ * s.d2 * da * da;
    });
  }

 private:
  template <class F>
  void visit(const CostInputs& in, F&& f) const {
    for (const FootholdBlock& fb : footholds_) {
      for (int i = 0; i < fb.count; ++i) {
        const int j = fb.u_offset + 3 * i;
        for (const GapSpec& gap : gaps_) {
          const SmoothAbs a = smooth_abs(in.U[j] - gap.g_x, kKinkSmoothing);
          f(j, smooth_plus_eval(a.value, {gap.half_width, eps_}), a.d1);
        }
      }
    }
  }

  std::vector<GapSpec> gaps_;
  std::vector<FootholdBlock> footholds_;
  double K8_, eps_;
};

/// K9 sum_i sum_t -exp(-|s^i - t|^2 / (2 K10^2)).
///
/// Curvature is the exact Hessian with its negative eigenvalue (along
/// s - t, outside one width) clipped to zero.
class SteppingStoneCost : public CostTerm {
 public:
  SteppingStoneCost(StoneField field, std::vector<FootholdBlock> footholds, double K9 = 0.1,
                    double K10 = 0.041)
      : field_(std::move(field)), footholds_(std::move(footholds)), K9_(K9), K10_(K10) {}

  std::string name() const override { return "stepping_stones"; }

  double value(const CostInputs& in) const override {
    double J = 0.0;
    const double inv = 1.0 / (2.0 * K10_ * K10_);
    for (const FootholdBlock& fb : footholds_) {
      for (int i = 0; i < fb.count; ++i) {
        const Vector3 s = in.U.segment<3>(fb.u_offset + 3 * i);
        for (const Vector3& t : field_.stones) J -= K9_ * std::exp(-(s - t).squaredNorm() * inv);
      }
    }
    return J;
  }

  void accumulate(const CostInputs& in, CostDerivatives& out) const override {
    const double s2 = K10_ * K10_;
    for (const FootholdBlock& fb : footholds_) {
      for (int i = 0; i < fb.count; ++i) {
        const int j = fb.u_offset + 3 * i;
        const Vector3 s = in.U.segment<3>(j);
        for (const Vector3& t : field_.stones) {
          const Vector3 d = s - t;
          const double r2 = d.squaredNorm();
          const double e = K9_ * std::exp(-0.5 * r2 / s2);
          out.value -= e;
          if (e < 1e-300) continue;
          out.dU.segment<3>(j) += (e / s2) * d;
          Matrix3 H = (e / s2) * Matrix3::Identity();
          if (r2 > 0.0) {
            const double along = std::max(0.0, 1.0 - r2 / s2);
            H -= (e / s2) * (1.0 - along) * d * d.transpose() / r2;
          }
          out.Huu.block<3, 3>(j, j) += H;
        }
      }
    }
  }

  const StoneField& field() const { return field_; }

 private:
  StoneField field_;
  std::vector<FootholdBlock> footholds_;
  double K9_, K10_;
};

/// K11 sum_{k=0}^{N} S_{>=d_min}(|r_k^a - r_k^b|), distance smoothed.
class CollisionCost : public CostTerm {
 public:
  CollisionCost(RobotLayout a, RobotLayout b, double K11 = 1.0, double min_distance = 1.0,
                double eps = 0.1)
      : a_(a), b_(b), K11_(K11), min_distance_(min_distance), eps_(eps) {}

  std::string name() const override { return "collision"; }

  double value(const CostInputs& in) const override {
    double J = 0.0;
    for (int k = 0; k <= in.dims.N; ++k) J += K11_ * term(in, k).s.value;
    return J;
  }

  void accumulate(const CostInputs& in, CostDerivatives& out) const override {
    for (int k = 0; k <= in.dims.N; ++k) {
      const Term t = term(in, k);
      out.value += K11_ * t.s.value;
      if (k == 0 || t.s.d2 == 0.0) continue;
      auto g = out.grad_state(k);
      g.segment<3>(a_.state_offset) += K11_ * t.s.d1 * t.u;
      g.segment<3>(b_.state_offset) -= K11_ * t.s.d1 * t.u;
      const Matrix3 uu = K11_ * t.s.d2 * t.u * t.u.transpose();
      Matrix& H = out.hess_state(k);
      H.block<3, 3>(a_.state_offset, a_.state_offset) += uu;
      H.block<3, 3>(a_.state_offset, b_.state_offset) -= uu;
      H.block<3, 3>(b_.state_offset, a_.state_offset) -= uu;
      H.block<3, 3>(b_.state_offset, b_.state_offset) += uu;
    }
  }

 private:
  struct Term {
    SmoothPlusValue s;
    Vector3 u;  ///< d distance / d r_a
  };

  Term term(const CostInputs& in, int k) const {
    const auto x = k == 0 ? in.x0.segment(0, in.dims.n) : in.state(k);
    const Vector3 diff = x.segment<3>(a_.state_offset) - x.segment<3>(b_.state_offset);
    const double dist = std::sqrt(diff.squaredNorm() + kKinkSmoothing * kKinkSmoothing);
    return {smooth_plus_eval(dist, {min_distance_, eps_}), diff / dist};
  }

  RobotLayout a_, b_;
  double K11_, min_distance_, eps_;
};

}  // namespace legmpc

#endif  // LEGMPC_SCENARIOS_TERRAIN_COSTS_HPP_
