#include "tnut/cone.hpp"

namespace tnut {

namespace {

// per-component action of left multiplication by i, j, k on (q0,q1,q2,q3)
inline void left_i(const double* u, double* out) {
  out[0] = -u[1]; out[1] = u[0]; out[2] = -u[3]; out[3] = u[2];
}
inline void left_j(const double* u, double* out) {
  out[0] = -u[2]; out[1] = u[3]; out[2] = u[0]; out[3] = -u[1];
}
inline void left_k(const double* u, double* out) {
  out[0] = -u[3]; out[1] = -u[2]; out[2] = u[1]; out[3] = u[0];
}
// u -> u * i
inline void right_i(const double* u, double* out) {
  out[0] = -u[1]; out[1] = u[0]; out[2] = u[3]; out[3] = -u[2];
}

inline void apply_left(int axis, const double* u, double* out) {
  switch (axis) {
    case 1: left_i(u, out); break;
    case 2: left_j(u, out); break;
    case 3: left_k(u, out); break;
    default: throw std::invalid_argument("axis must be 1, 2 or 3");
  }
}

}  // namespace

Eigen::MatrixXd complex_structure(int axis, int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  Eigen::Matrix4d block = Eigen::Matrix4d::Zero();
  double e[4], out[4];
  for (int c = 0; c < 4; ++c) {
    for (int r = 0; r < 4; ++r) e[r] = (r == c) ? 1.0 : 0.0;
    apply_left(axis, e, out);
    for (int r = 0; r < 4; ++r) block(r, c) = out[r];
  }
  for (int a = 0; a < n; ++a) J.block<4, 4>(4 * a, 4 * a) = block;
  return J;
}

Eigen::MatrixXd flat_kahler_form(int axis, int n) {
  return complex_structure(axis, n).transpose();
}

Eigen::MatrixXd generator_matrix(const CircleActionSpec& spec) {
  const int n = spec.n();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  // u -> u*i blockwise: 1*i=i, i*i=-1, j*i=-k, k*i=j
  Eigen::Matrix4d ri;
  ri << 0, -1, 0, 0,
        1,  0, 0, 0,
        0,  0, 0, 1,
        0,  0, -1, 0;
  for (int a = 0; a < n; ++a) A.block<4, 4>(4 * a, 4 * a) = spec.weights[a] * ri;
  return A;
}

Eigen::VectorXd circle_generator(const CircleActionSpec& spec, const ConePoint& m) {
  const int n = spec.n();
  if (m.n() != n) throw std::invalid_argument("point/spec size mismatch");
  Eigen::VectorXd T(4 * n);
  double out[4];
  for (int a = 0; a < n; ++a) {
    right_i(m.coords.data() + 4 * a, out);
    for (int r = 0; r < 4; ++r) T[4 * a + r] = spec.weights[a] * out[r];
  }
  return T;
}

Eigen::VectorXd structure_times_generator(const CircleActionSpec& spec, int axis, const ConePoint& m) {
  const int n = spec.n();
  Eigen::VectorXd v(4 * n);
  double t[4], out[4];
  for (int a = 0; a < n; ++a) {
    right_i(m.coords.data() + 4 * a, t);
    for (int r = 0; r < 4; ++r) t[r] *= spec.weights[a];
    apply_left(axis, t, out);
    for (int r = 0; r < 4; ++r) v[4 * a + r] = out[r];
  }
  return v;
}

Eigen::Vector3d moment_map(const CircleActionSpec& spec, const ConePoint& m) {
  Eigen::Vector3d x;
  for (int j = 1; j <= 3; ++j) {
    x[j - 1] = -0.5 * m.coords.dot(structure_times_generator(spec, j, m));
  }
  return x;
}

Eigen::Vector3d moment_map_closed_form(const CircleActionSpec& spec, const ConePoint& m) {
  double x1 = 0.0;
  std::complex<double> x23(0.0, 0.0);
  for (int a = 0; a < spec.n(); ++a) {
    const auto z = m.z(a);
    const auto w = m.w(a);
    x1 += 0.5 * spec.weights[a] * (std::norm(z) - std::norm(w));
    x23 += std::complex<double>(0.0, -1.0) * double(spec.weights[a]) * z * w;
  }
  return {x1, x23.real(), x23.imag()};
}

Eigen::MatrixXd moment_jacobian(const CircleActionSpec& spec, const ConePoint& m) {
  Eigen::MatrixXd J(3, m.dim());
  for (int j = 1; j <= 3; ++j) J.row(j - 1) = -structure_times_generator(spec, j, m).transpose();
  return J;
}

ConnectionData connection_data(const CircleActionSpec& spec, const ConePoint& m) {
  ConnectionData c;
  c.T = circle_generator(spec, m);
  const double t2 = c.T.squaredNorm();
  if (std::sqrt(t2) <= 1e-14 * m.rho()) throw std::domain_error("degenerate circle action: |T| ~ 0");
  c.V = 1.0 / t2;
  c.theta = c.T;
  c.eta = c.V * c.theta;
  return c;
}

ReebFrame reeb_frame(const ConePoint& m) {
  ReebFrame f;
  f.euler = m.coords;
  const int n = m.n();
  double out[4];
  for (int j = 1; j <= 3; ++j) {
    f.xi[j - 1].resize(4 * n);
    for (int a = 0; a < n; ++a) {
      apply_left(j, m.coords.data() + 4 * a, out);
      for (int r = 0; r < 4; ++r) f.xi[j - 1][4 * a + r] = out[r];
    }
  }
  return f;
}

ConePoint sp1_act(const Quaternion& q, const ConePoint& m) {
  if (!q.is_unit(1e-10)) throw std::invalid_argument("sp1_act requires |q| = 1");
  ConePoint r = m;
  for (int a = 0; a < m.n(); ++a) r.set_quat(a, q * m.quat(a));
  return r;
}

ConePoint circle_act(const CircleActionSpec& spec, double t, const ConePoint& m) {
  ConePoint r = m;
  for (int a = 0; a < spec.n(); ++a) {
    const double ph = spec.weights[a] * t;
    const std::complex<double> e(std::cos(ph), std::sin(ph));
    r.set_zw(a, m.z(a) * e, m.w(a) * std::conj(e));
  }
  return r;
}

Eigen::MatrixXd circle_act_matrix(const CircleActionSpec& spec, double t) {
  const int n = spec.n();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  for (int a = 0; a < n; ++a) {
    const double c = std::cos(spec.weights[a] * t);
    const double s = std::sin(spec.weights[a] * t);
    Eigen::Matrix4d B;
    B << c, -s, 0, 0,
         s,  c, 0, 0,
         0,  0, c, s,
         0,  0, -s, c;
    M.block<4, 4>(4 * a, 4 * a) = B;
  }
  return M;
}

}  // namespace tnut
