#include "tnut/quaternion.hpp"

namespace tnut {

Eigen::Matrix4d left_mult_matrix(const Quaternion& q) {
  Eigen::Matrix4d m;
  // columns are q*1, q*i, q*j, q*k
  m << q.q0, -q.q1, -q.q2, -q.q3,
       q.q1,  q.q0, -q.q3,  q.q2,
       q.q2,  q.q3,  q.q0, -q.q1,
       q.q3, -q.q2,  q.q1,  q.q0;
  return m;
}

Eigen::Matrix4d right_mult_matrix(const Quaternion& q) {
  Eigen::Matrix4d m;
  m << q.q0, -q.q1, -q.q2, -q.q3,
       q.q1,  q.q0,  q.q3, -q.q2,
       q.q2, -q.q3,  q.q0,  q.q1,
       q.q3,  q.q2, -q.q1,  q.q0;
  return m;
}

Eigen::Matrix3d covering_phi(const Quaternion& q) {
  if (!q.is_unit(1e-10)) throw std::invalid_argument("covering_phi requires |q| = 1");
  Eigen::Matrix3d r;
  const Quaternion qc = q.conj();
  const Quaternion basis[3] = {Quaternion::i(), Quaternion::j(), Quaternion::k()};
  for (int c = 0; c < 3; ++c) {
    const Quaternion v = q * basis[c] * qc;
    r(0, c) = v.q1;
    r(1, c) = v.q2;
    r(2, c) = v.q3;
  }
  return r;
}

Quaternion rotation_to_axis(const Eigen::Vector3d& x) {
  const double nx = x.norm();
  if (nx == 0.0) throw std::invalid_argument("rotation_to_axis requires x != 0");
  const Eigen::Vector3d xhat = x / nx;
  const Eigen::Vector3d e1(1, 0, 0);
  const double c = xhat.dot(e1);
  if (c > 1.0 - 1e-14) return Quaternion::one();
  if (c < -1.0 + 1e-14) return Quaternion::k();
  Eigen::Vector3d axis = e1.cross(xhat);
  axis.normalize();
  const double angle = std::acos(std::clamp(c, -1.0, 1.0));
  const double s = std::sin(0.5 * angle);
  return Quaternion(std::cos(0.5 * angle), s * axis[0], s * axis[1], s * axis[2]);
}

}  // namespace tnut
