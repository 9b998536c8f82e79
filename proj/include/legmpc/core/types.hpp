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

#ifndef LEGMPC_CORE_TYPES_HPP_
#define LEGMPC_CORE_TYPES_HPP_

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace legmpc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector3 = Eigen::Vector3d;
using Vector4 = Eigen::Vector4d;
using Matrix3 = Eigen::Matrix3d;

/// Sizes of the stacked finite-horizon problem.
///
/// The stacked state X holds x_1..x_N (x_0 is the measurement and is not a
/// decision variable). The stacked decision vector U holds u_0..u_{N-1}
/// followed by the time-invariant parameter block.
struct ProblemDims {
  int n = 0;  ///< state size per step
  int m = 0;  ///< control size per step
  int p = 0;  ///< parameter size (3 per optimized foothold)
  int N = 0;  ///< horizon length in steps
  double dt = 0.0;

  int state_size() const { return N * n; }
  int decision_size() const { return N * m + p; }
  int control_offset(int k) const { return k * m; }
  int param_offset() const { return N * m; }
  /// Row offset of x_k inside X, valid for k in [1, N].
  int state_offset(int k) const { return (k - 1) * n; }

  bool valid() const { return n > 0 && m >= 0 && p >= 0 && N > 0 && dt > 0.0; }
};

inline bool operator==(const ProblemDims& a, const ProblemDims& b) {
  return a.n == b.n && a.m == b.m && a.p == b.p && a.N == b.N && a.dt == b.dt;
}

struct StackedTrajectory {
  Vector x0;
  Vector X;
  Vector U;
};

/// Partial derivatives of one residual block G_k(x_k, x_{k+1}, u_k, p).
struct StepJacobians {
  Matrix A;  ///< dG_k/dx_k       (n x n)
  Matrix E;  ///< dG_k/dx_{k+1}   (n x n), identity for explicit models
  Matrix B;  ///< dG_k/du_k       (n x m)
  Matrix P;  ///< dG_k/dp         (n x p)
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a rollout produces a non-finite state or the model refuses to
/// step. `step()` is the index k of the transition x_k -> x_{k+1} that failed.
class DivergedRolloutError : public std::runtime_error {
 public:
  DivergedRolloutError(int step, const std::string& what)
      : std::runtime_error("rollout diverged at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class SingularDynamicsError : public std::runtime_error {
 public:
  SingularDynamicsError(int step, const std::string& what)
      : std::runtime_error("singular dynamics at step " + std::to_string(step) + ": " + what),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

inline void require_size(const Eigen::Ref<const Vector>& v, int expected, const char* what) {
  if (v.size() != expected) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(v.size()));
  }
}

}  // namespace legmpc

#endif  // LEGMPC_CORE_TYPES_HPP_
