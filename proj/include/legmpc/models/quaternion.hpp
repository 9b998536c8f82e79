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

#ifndef LEGMPC_MODELS_QUATERNION_HPP_
#define LEGMPC_MODELS_QUATERNION_HPP_

// Quaternions are raw 4-vectors ordered (w, x, y, z).

#include <Eigen/Core>

#include <cmath>

namespace legmpc::quat {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat34 = Eigen::Matrix<double, 3, 4>;
using Mat43 = Eigen::Matrix<double, 4, 3>;

inline constexpr double kSmallAngle = 1e-8;

inline Vec4 identity() { return Vec4(1.0, 0.0, 0.0, 0.0); }

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return s;
}

inline Vec4 conj(const Vec4& q) { return Vec4(q[0], -q[1], -q[2], -q[3]); }

inline Mat4 conj_matrix() { return Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal(); }

/// a * b == left(a) * b
inline Mat4 left(const Vec4& a) {
  Mat4 L;
  L << a[0], -a[1], -a[2], -a[3],
       a[1],  a[0], -a[3],  a[2],
       a[2],  a[3],  a[0], -a[1],
       a[3], -a[2],  a[1],  a[0];
  return L;
}

/// a * b == right(b) * a
inline Mat4 right(const Vec4& b) {
  Mat4 R;
  R << b[0], -b[1], -b[2], -b[3],
       b[1],  b[0],  b[3], -b[2],
       b[2], -b[3],  b[0],  b[1],
       b[3],  b[2], -b[1],  b[0];
  return R;
}

inline Vec4 mul(const Vec4& a, const Vec4& b) { return left(a) * b; }

inline Vec3 im(const Vec4& q) { return q.tail<3>(); }

/// Unit quaternion exp(v) = (cos(|v|/2), v/|v| sin(|v|/2)).
inline Vec4 exp(const Vec3& v) {
  const double th = v.norm();
  Vec4 q;
  if (th < kSmallAngle) {
    q[0] = 1.0 - th * th / 8.0;
    q.tail<3>() = (0.5 - th * th / 48.0) * v;
    return q / q.norm();
  }
  q[0] = std::cos(0.5 * th);
  q.tail<3>() = v * (std::sin(0.5 * th) / th);
  return q;
}

/// d exp(v) / dv, 4x3.
inline Mat43 exp_jacobian(const Vec3& v) {
  const double th = v.norm();
  // s(th) = sin(th/2)/th and ds/dth / th, series below 1e-2.
  double s, ds_over_th;
  if (th < 1e-2) {
    const double t2 = th * th;
    s = 0.5 - t2 / 48.0 + t2 * t2 / 3840.0;
    ds_over_th = -1.0 / 24.0 + t2 / 960.0;
  } else {
    s = std::sin(0.5 * th) / th;
    ds_over_th = (0.5 * th * std::cos(0.5 * th) - std::sin(0.5 * th)) / (th * th * th);
  }
  Mat43 J;
  J.row(0) = -0.5 * s * v.transpose();
  J.bottomRows<3>() = s * Mat3::Identity() + ds_over_th * v * v.transpose();
  return J;
}

/// Rotation vector of q, the inverse of exp: 2 atan2(|v|, w) v / |v|.
/// Defined for any 4-vector with w > 0 or v != 0.
inline Vec3 log(const Vec4& q) {
  const double w = q[0];
  const Vec3 v = q.tail<3>();
  const double n = v.norm();
  if (w > 0.0 && n < 1e-3 * w) {
    const double t2 = n * n / (w * w);
    return 2.0 * (1.0 - t2 / 3.0 + t2 * t2 / 5.0) / w * v;
  }
  return 2.0 * (std::atan2(n, w) / n) * v;
}

/// d log(q) / dq, 3x4.
inline Mat34 log_jacobian(const Vec4& q) {
  const double w = q[0];
  const Vec3 v = q.tail<3>();
  const double n2 = v.squaredNorm();
  const double n = std::sqrt(n2);
  // log = 2 a v with a = atan2(n, w) / n; c = (da/dn) / n.
  double a, c;
  if (w > 0.0 && n < 1e-3 * w) {
    const double t2 = n2 / (w * w);
    a = (1.0 - t2 / 3.0 + t2 * t2 / 5.0) / w;
    c = (-2.0 / 3.0 + 4.0 * t2 / 5.0) / (w * w * w);
  } else {
    const double th = std::atan2(n, w);
    a = th / n;
    c = (w * n / (w * w + n2) - th) / (n2 * n);
  }
  Mat34 J;
  J.col(0) = -2.0 / (w * w + n2) * v;
  J.rightCols<3>() = 2.0 * (a * Mat3::Identity() + c * v * v.transpose());
  return J;
}

inline Vec4 normalized(const Vec4& q) { return q / q.norm(); }

/// d (q/|q|) / dq.
inline Mat4 normalize_jacobian(const Vec4& q) {
  const double n = q.norm();
  const Vec4 u = q / n;
  return (Mat4::Identity() - u * u.transpose()) / n;
}

/// Rotation matrix of a unit quaternion (homogeneous quadratic form).
inline Mat3 rotation(const Vec4& q) {
  const double w = q[0];
  const Vec3 v = q.tail<3>();
  return (w * w - v.squaredNorm()) * Mat3::Identity() + 2.0 * v * v.transpose() + 2.0 * w * skew(v);
}

/// R(q)^T a, i.e. a world vector expressed in the body frame.
inline Vec3 rotate_inverse(const Vec4& q, const Vec3& a) {
  const double w = q[0];
  const Vec3 v = q.tail<3>();
  return (w * w - v.squaredNorm()) * a + 2.0 * v * v.dot(a) - 2.0 * w * v.cross(a);
}

/// d (R(q)^T a) / dq, 3x4.
inline Mat34 rotate_inverse_jacobian(const Vec4& q, const Vec3& a) {
  const double w = q[0];
  const Vec3 v = q.tail<3>();
  Mat34 J;
  J.col(0) = 2.0 * w * a - 2.0 * v.cross(a);
  J.rightCols<3>() = -2.0 * a * v.transpose() + 2.0 * v.dot(a) * Mat3::Identity() +
                     2.0 * v * a.transpose() + 2.0 * w * skew(a);
  return J;
}

inline Vec4 from_yaw(double yaw) { return Vec4(std::cos(0.5 * yaw), 0.0, 0.0, std::sin(0.5 * yaw)); }

inline double yaw_of(const Vec4& q) {
  return std::atan2(2.0 * (q[0] * q[3] + q[1] * q[2]), 1.0 - 2.0 * (q[2] * q[2] + q[3] * q[3]));
}

}  // namespace legmpc::quat

#endif  // LEGMPC_MODELS_QUATERNION_HPP_
