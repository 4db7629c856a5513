#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace tnut {

/// A quaternion q0 + q1 i + q2 j + q3 k with double components.
struct Quaternion {
  double q0 = 0.0, q1 = 0.0, q2 = 0.0, q3 = 0.0;

  Quaternion() = default;
  Quaternion(double a, double b, double c, double d) : q0(a), q1(b), q2(c), q3(d) {}

  static Quaternion one() { return {1, 0, 0, 0}; }
  static Quaternion i() { return {0, 1, 0, 0}; }
  static Quaternion j() { return {0, 0, 1, 0}; }
  static Quaternion k() { return {0, 0, 0, 1}; }

  double norm2() const { return q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3; }
  double norm() const { return std::sqrt(norm2()); }
  Quaternion conj() const { return {q0, -q1, -q2, -q3}; }
  bool is_unit(double tol = 1e-12) const { return std::abs(norm() - 1.0) <= tol; }

  Quaternion normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero quaternion");
    return {q0 / n, q1 / n, q2 / n, q3 / n};
  }

  Eigen::Vector4d vec() const { return {q0, q1, q2, q3}; }
  static Quaternion from_vec(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
  Eigen::Vector3d imag() const { return {q1, q2, q3}; }
};

inline Quaternion operator+(const Quaternion& a, const Quaternion& b) {
  return {a.q0 + b.q0, a.q1 + b.q1, a.q2 + b.q2, a.q3 + b.q3};
}
inline Quaternion operator-(const Quaternion& a, const Quaternion& b) {
  return {a.q0 - b.q0, a.q1 - b.q1, a.q2 - b.q2, a.q3 - b.q3};
}
inline Quaternion operator*(double s, const Quaternion& a) {
  return {s * a.q0, s * a.q1, s * a.q2, s * a.q3};
}

/// Hamilton product.
inline Quaternion operator*(const Quaternion& a, const Quaternion& b) {
  return {a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
          a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
          a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
          a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0};
}

/// 4x4 matrix of u -> q*u on components (q0,q1,q2,q3).
Eigen::Matrix4d left_mult_matrix(const Quaternion& q);

/// 4x4 matrix of u -> u*q.
Eigen::Matrix4d right_mult_matrix(const Quaternion& q);

/// The 2-fold covering Sp(1) -> SO(3): v -> q v q^{-1} on Im(H) = R^3.
/// Rejects non-unit q.
Eigen::Matrix3d covering_phi(const Quaternion& q);

/// A unit quaternion q with covering_phi(q) * e1 = x/|x|, i.e. the rotation
/// taking the first coordinate axis to the direction of x.  Deterministic:
/// minimal rotation in the plane spanned by e1 and x; the antipode x = -|x| e1
/// uses the rotation by pi about e3, q = k.
Quaternion rotation_to_axis(const Eigen::Vector3d& x);

}  // namespace tnut
