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

#ifndef LEGMPC_MODELS_SMOOTH_PLUS_HPP_
#define LEGMPC_MODELS_SMOOTH_PLUS_HPP_

#include <cmath>

namespace legmpc {

struct SmoothPlusParams {
  double r = 0.0;    ///< threshold
  double eps = 0.1;  ///< half-width of the cubic blend
};

struct SmoothPlusValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/**
 * C2 one-sided penalty S_{>=r}(x), with G = x - r:
 *
 *   0                                          G >= eps
 *   -G^3/(6 eps) + G^2/2 - eps G/2 + eps^2/6   -eps <= G < eps
 *   G^2 + eps^2/3                              G < -eps
 *
 * Convex, non-negative, and zero exactly on G >= eps.
 */
inline SmoothPlusValue smooth_plus_eval(double x, const SmoothPlusParams& params = {}) {
  const double g = x - params.r;
  const double e = params.eps;
  if (g >= e) return {};
  if (g < -e) return {g * g + e * e / 3.0, 2.0 * g, 2.0};
  // Factored form of the cubic, (eps - G)^3 / (6 eps).
  const double m = e - g;
  return {m * m * m / (6.0 * e), -m * m / (2.0 * e), m / e};
}

inline double smooth_plus(double x, const SmoothPlusParams& params = {}) {
  return smooth_plus_eval(x, params).value;
}

inline double smooth_plus_d1(double x, const SmoothPlusParams& params = {}) {
  return smooth_plus_eval(x, params).d1;
}

inline double smooth_plus_d2(double x, const SmoothPlusParams& params = {}) {
  return smooth_plus_eval(x, params).d2;
}

/// sqrt(x^2 + delta^2), a differentiable stand-in for |x|.
struct SmoothAbs {
  double value;
  double d1;
};

inline SmoothAbs smooth_abs(double x, double delta = 1e-6) {
  const double v = std::sqrt(x * x + delta * delta);
  return {v, x / v};
}

}  // namespace legmpc

#endif  // LEGMPC_MODELS_SMOOTH_PLUS_HPP_
