#pragma once

#include <Eigen/Dense>
#include <array>
#include <stdexcept>

#include "tnut/quaternion.hpp"

namespace tnut {

/// Integer weight vector (a_1,...,a_n) of the circle action
/// e^{it}.(u_1,...,u_n) = (u_1 e^{i a_1 t},...,u_n e^{i a_n t}).
struct CircleActionSpec {
  Eigen::VectorXi weights;

  int n() const { return static_cast<int>(weights.size()); }
  int dim() const { return 4 * n(); }

  static CircleActionSpec standard(int n) {
    CircleActionSpec s;
    s.weights = Eigen::VectorXi::Ones(n);
    return s;
  }
  static CircleActionSpec of(std::initializer_list<int> w) {
    CircleActionSpec s;
    s.weights.resize(static_cast<Eigen::Index>(w.size()));
    int i = 0;
    for (int v : w) s.weights[i++] = v;
    return s;
  }

  bool all_nonzero() const { return (weights.array() != 0).all(); }
};

/// A point of H^n \ {0} as a real 4n-vector, component ordering
/// (q_{a0}, q_{a1}, q_{a2}, q_{a3}) per quaternion u_a.
struct ConePoint {
  Eigen::VectorXd coords;

  ConePoint() = default;
  explicit ConePoint(Eigen::VectorXd c) : coords(std::move(c)) {
    if (coords.size() % 4 != 0) throw std::invalid_argument("ConePoint needs 4n coordinates");
  }

  int n() const { return static_cast<int>(coords.size()) / 4; }
  int dim() const { return static_cast<int>(coords.size()); }
  double rho2() const { return coords.squaredNorm(); }
  double rho() const { return coords.norm(); }

  Quaternion quat(int alpha) const {
    return {coords[4 * alpha], coords[4 * alpha + 1], coords[4 * alpha + 2], coords[4 * alpha + 3]};
  }
  void set_quat(int alpha, const Quaternion& q) {
    coords[4 * alpha] = q.q0;
    coords[4 * alpha + 1] = q.q1;
    coords[4 * alpha + 2] = q.q2;
    coords[4 * alpha + 3] = q.q3;
  }

  /// z_a + w_a j splitting of component a.
  std::complex<double> z(int alpha) const { return {coords[4 * alpha], coords[4 * alpha + 1]}; }
  std::complex<double> w(int alpha) const { return {coords[4 * alpha + 2], coords[4 * alpha + 3]}; }
  void set_zw(int alpha, std::complex<double> zv, std::complex<double> wv) {
    coords[4 * alpha] = zv.real();
    coords[4 * alpha + 1] = zv.imag();
    coords[4 * alpha + 2] = wv.real();
    coords[4 * alpha + 3] = wv.imag();
  }

  ConePoint scaled(double lambda) const { return ConePoint(lambda * coords); }
};

/// Left multiplication by i, j, k on H^n as a dense 4n x 4n matrix (axis 1..3).
Eigen::MatrixXd complex_structure(int axis, int n);

/// Matrix A with T(m) = A m, the generator of the weighted circle action
/// (component alpha is u_alpha * (i a_alpha)).
Eigen::MatrixXd generator_matrix(const CircleActionSpec& spec);

/// T(m), evaluated blockwise.
Eigen::VectorXd circle_generator(const CircleActionSpec& spec, const ConePoint& m);

/// I_axis T(m) without forming matrices.
Eigen::VectorXd structure_times_generator(const CircleActionSpec& spec, int axis, const ConePoint& m);

/// Hyperkahler moment map x_j = -(1/4) d(rho^2)(I_j T) = -(1/2) <m, I_j T>.
Eigen::Vector3d moment_map(const CircleActionSpec& spec, const ConePoint& m);

/// Weighted closed form x_1 = (1/2) sum a (|z|^2 - |w|^2), x_2 + i x_3 = -i sum a z w.
/// Cross-check path; must agree with moment_map.
Eigen::Vector3d moment_map_closed_form(const CircleActionSpec& spec, const ConePoint& m);

/// 3 x 4n matrix with rows dx_j = -(I_j T)^T.
Eigen::MatrixXd moment_jacobian(const CircleActionSpec& spec, const ConePoint& m);

struct ConnectionData {
  double V = 0.0;           // 1/|T|^2
  Eigen::VectorXd T;        // generator at m
  Eigen::VectorXd theta;    // g0(T, .)
  Eigen::VectorXd eta;      // V theta, eta(T) = 1
};

/// Throws std::domain_error when |T| <= 1e-14 rho (degenerate action).
ConnectionData connection_data(const CircleActionSpec& spec, const ConePoint& m);

struct ReebFrame {
  Eigen::VectorXd euler;               // rho d/drho = position vector
  std::array<Eigen::VectorXd, 3> xi;   // xi_i = I_i (rho d/drho)
};

ReebFrame reeb_frame(const ConePoint& m);

/// Left multiplication by a unit quaternion, componentwise.  Rejects non-unit q.
ConePoint sp1_act(const Quaternion& q, const ConePoint& m);

/// The time-t circle action u_a -> u_a e^{i a_a t}.
ConePoint circle_act(const CircleActionSpec& spec, double t, const ConePoint& m);
Eigen::MatrixXd circle_act_matrix(const CircleActionSpec& spec, double t);

/// 2-form matrix of the wedge a ^ b of two covectors: (a^b)(X,Y) = a(X)b(Y) - a(Y)b(X).
inline Eigen::MatrixXd wedge(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a * b.transpose() - b * a.transpose();
}

/// Flat Kahler form matrices W_i = I_i^T with omega_i(X,Y) = X^T W_i Y = <I_i X, Y>.
Eigen::MatrixXd flat_kahler_form(int axis, int n);

}  // namespace tnut
