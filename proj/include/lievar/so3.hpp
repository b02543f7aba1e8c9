#pragma once

// Rotation-group kernel: hat/vee, exponential and logarithm on SO(3).

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

namespace lievar {

using AlgebraVector = Eigen::VectorXd;
using DualVector = Eigen::VectorXd;
using GroupElement = Eigen::Matrix3d;
using GroupTangentMatrix = Eigen::Matrix3d;

inline GroupTangentMatrix hat(const Eigen::Vector3d& v) {
  GroupTangentMatrix m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

inline GroupTangentMatrix hat(const AlgebraVector& v) {
  if (v.size() != 3) throw std::invalid_argument("hat: expected a 3-vector");
  return hat(Eigen::Vector3d(v));
}

/// Inverse of hat. Rejects inputs that are not skew within `tol`.
inline Eigen::Vector3d vee(const GroupTangentMatrix& m, double tol = 1e-10) {
  if ((m + m.transpose()).lpNorm<Eigen::Infinity>() > tol)
    throw std::invalid_argument("vee: matrix is not skew-symmetric");
  return {m(2, 1), m(0, 2), m(1, 0)};
}

inline GroupTangentMatrix so3_generator(int i) {
  Eigen::Vector3d e = Eigen::Vector3d::Zero();
  e(i) = 1.0;
  return hat(e);
}

/// exp(hat(xi)) by the closed-form rotation formula, with a degree-4
/// series below ||xi|| = 1e-6.
inline GroupElement group_exp(const Eigen::Vector3d& xi) {
  const double theta2 = xi.squaredNorm();
  const double theta = std::sqrt(theta2);
  const GroupTangentMatrix w = hat(xi);
  if (theta < 1e-6) {
    const GroupTangentMatrix w2 = w * w;
    return GroupElement::Identity() + w + 0.5 * w2 + (1.0 / 6.0) * w2 * w +
           (1.0 / 24.0) * w2 * w2;
  }
  return GroupElement::Identity() + (std::sin(theta) / theta) * w +
         ((1.0 - std::cos(theta)) / theta2) * w * w;
}

inline GroupElement group_exp(const AlgebraVector& xi) {
  if (xi.size() != 3) throw std::invalid_argument("group_exp: expected a 3-vector");
  return group_exp(Eigen::Vector3d(xi));
}

/// Rotation logarithm via the quaternion chart; the pi-rotation branch is
/// handled by the quaternion extraction (symmetric part of R).
inline Eigen::Vector3d group_log(const GroupElement& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  const Eigen::Vector3d v = q.vec();
  const double s = v.norm();
  if (s < 1e-9) return 2.0 * v;
  return (2.0 * std::atan2(s, q.w()) / s) * v;
}

inline bool is_rotation(const GroupElement& r, double tol = 1e-10) {
  return (r.transpose() * r - GroupElement::Identity()).norm() <= tol &&
         std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace lievar
