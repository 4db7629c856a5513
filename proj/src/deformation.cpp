#include "tnut/deformation.hpp"

#include <Eigen/Eigenvalues>

namespace tnut {

StructureAtPoint undeformed_structure(int n, const ConePoint& m) {
  StructureAtPoint s;
  s.a = 0.0;
  s.base = m;
  s.g = Eigen::MatrixXd::Identity(4 * n, 4 * n);
  for (int i = 0; i < 3; ++i) {
    s.I[i] = complex_structure(i + 1, n);
    s.omega[i] = s.I[i].transpose();
  }
  return s;
}

StructureAtPoint deformed_structure(const CircleActionSpec& spec, double a, const ConePoint& m) {
  const int n = spec.n();
  StructureAtPoint s = undeformed_structure(n, m);
  s.a = a;
  if (a == 0.0) return s;

  const ConnectionData c = connection_data(spec, m);
  const double V = c.V;
  const double a2 = a * a;
  std::array<Eigen::VectorXd, 3> dx;
  for (int i = 0; i < 3; ++i) dx[i] = -structure_times_generator(spec, i + 1, m);

  for (int i = 0; i < 3; ++i) s.g += a2 * dx[i] * dx[i].transpose();
  s.g += (1.0 / (V + a2) - 1.0 / V) * c.eta * c.eta.transpose();

  const double kfac = a2 * V / (a2 + V);
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd IiT = structure_times_generator(spec, i + 1, m);
    s.I[i] += -kfac * IiT * c.theta.transpose() + a2 * c.T * dx[i].transpose();
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    s.omega[i] += a2 * wedge(dx[j], dx[k]);
  }
  return s;
}

double potential_K1a(const CircleActionSpec& spec, double a, const ConePoint& m) {
  const Eigen::Vector3d x = moment_map(spec, m);
  return 0.5 * m.rho2() + a * a * x[0] * x[0] + 0.5 * a * a * (x[1] * x[1] + x[2] * x[2]);
}

Eigen::VectorXd potential_K1a_grad(const CircleActionSpec& spec, double a, const ConePoint& m) {
  const Eigen::Vector3d x = moment_map(spec, m);
  Eigen::VectorXd g = m.coords;
  const double a2 = a * a;
  g += -2.0 * a2 * x[0] * structure_times_generator(spec, 1, m);
  g += -a2 * x[1] * structure_times_generator(spec, 2, m);
  g += -a2 * x[2] * structure_times_generator(spec, 3, m);
  return g;
}

Eigen::VectorXd potential_K1a_dc(const CircleActionSpec& spec, double a, const ConePoint& m) {
  const StructureAtPoint s = deformed_structure(spec, a, m);
  return -(s.I[0].transpose() * potential_K1a_grad(spec, a, m));
}

Eigen::MatrixXd ddc_K1a(const CircleActionSpec& spec, double a, const ConePoint& m) {
  return 2.0 * deformed_structure(spec, a, m).omega[0];
}

Eigen::MatrixXd ddc_K1a_pow(const CircleActionSpec& spec, double a, double alpha, const ConePoint& m) {
  const double K = potential_K1a(spec, a, m);
  const Eigen::VectorXd dK = potential_K1a_grad(spec, a, m);
  const Eigen::VectorXd dcK = potential_K1a_dc(spec, a, m);
  return alpha * std::pow(K, alpha - 2.0) *
         ((alpha - 1.0) * wedge(dK, dcK) + K * ddc_K1a(spec, a, m));
}

Eigen::VectorXcd deformed_one_form(const Eigen::VectorXcd& alpha, int axis,
                                   const CircleActionSpec& spec, double a, const ConePoint& m) {
  const Eigen::MatrixXd Ij = complex_structure(axis, spec.n());
  const std::complex<double> iu(0.0, 1.0);
  const Eigen::VectorXcd defect = (Ij.transpose().cast<std::complex<double>>() * alpha) - iu * alpha;
  if (defect.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("deformed_one_form: input is not (1,0) for I_j");
  const Eigen::VectorXd T = circle_generator(spec, m);
  const Eigen::VectorXd dxj = -structure_times_generator(spec, axis, m);
  // plain pairing alpha(T), no conjugation
  const std::complex<double> alphaT = (alpha.transpose() * T.cast<std::complex<double>>())(0, 0);
  return alpha - iu * (a * a) * alphaT * dxj.cast<std::complex<double>>();
}

namespace {

DecompositionReport reconstruct(const Eigen::MatrixXd& g, const std::array<Eigen::MatrixXd, 3>& W,
                                const Eigen::VectorXd& T, const std::array<Eigen::MatrixXd, 3>& I) {
  DecompositionReport rep;
  const int d = static_cast<int>(T.size());
  const double Vq = 1.0 / (double(T.transpose() * g * T));
  const Eigen::VectorXd theta = g * T;
  const Eigen::VectorXd eta = Vq * theta;
  std::array<Eigen::VectorXd, 3> dx;
  for (int i = 0; i < 3; ++i) dx[i] = -(W[i].transpose() * T);

  // projector onto span(T, I_i T)^perp w.r.t. g; the four directions are
  // g-orthogonal here, so the Gram matrix is diagonal
  Eigen::MatrixXd B(d, 4);
  B.col(0) = T;
  for (int i = 0; i < 3; ++i) B.col(i + 1) = I[i] * T;
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(d, d);
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXd gb = g * B.col(k);
    P -= B.col(k) * (gb / B.col(k).dot(gb)).transpose();
  }
  rep.projector_residual = (P * P - P).cwiseAbs().maxCoeff();

  const Eigen::MatrixXd gbar = P.transpose() * g * P;
  Eigen::MatrixXd grec = gbar + (1.0 / Vq) * eta * eta.transpose();
  for (int i = 0; i < 3; ++i) grec += Vq * dx[i] * dx[i].transpose();
  rep.g_residual = (grec - g).cwiseAbs().maxCoeff();

  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    const Eigen::MatrixXd wbar = P.transpose() * W[i] * P;
    const Eigen::MatrixXd wrec = wbar + wedge(dx[i], eta) + Vq * wedge(dx[j], dx[k]);
    rep.omega_residual[i] = (wrec - W[i]).cwiseAbs().maxCoeff();
  }
  return rep;
}

}  // namespace

DecompositionReport decomposition_check(const CircleActionSpec& spec, double a, const ConePoint& m) {
  const StructureAtPoint s = deformed_structure(spec, a, m);
  const Eigen::VectorXd T = circle_generator(spec, m);
  return reconstruct(s.g, s.omega, T, s.I);
}

DecompositionReport decomposition_check_field(int n, const Eigen::VectorXd& T) {
  ConePoint dummy(Eigen::VectorXd::Zero(4 * n));
  const StructureAtPoint s = undeformed_structure(n, dummy);
  return reconstruct(s.g, s.omega, T, s.I);
}

double dkdck_pointwise(const CircleActionSpec& spec, double a, const ConePoint& m) {
  const double K = potential_K1a(spec, a, m);
  const Eigen::VectorXd dK = potential_K1a_grad(spec, a, m);
  const Eigen::VectorXd dcK = potential_K1a_dc(spec, a, m);
  const Eigen::MatrixXd g = deformed_structure(spec, a, m).g;
  // top eigenvalue of (dK dK^T + dcK dcK^T) against K g: 2x2 Gram in g^{-1}
  const Eigen::LLT<Eigen::MatrixXd> llt(g);
  const Eigen::VectorXd u = llt.solve(dK);
  const Eigen::VectorXd v = llt.solve(dcK);
  Eigen::Matrix2d gram;
  gram << dK.dot(u), dK.dot(v),
          dcK.dot(u), dcK.dot(v);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (gram + gram.transpose()));
  return es.eigenvalues().maxCoeff() / K;
}

double dkdck_bound(const CircleActionSpec& spec, double a, std::span<const ConePoint> samples) {
  if (samples.empty()) throw std::invalid_argument("dkdck_bound: empty sample set");
  double worst = 0.0;
  for (const auto& m : samples) worst = std::max(worst, dkdck_pointwise(spec, a, m));
  if (!std::isfinite(worst)) throw std::runtime_error("dkdck_bound: non-finite constant");
  return worst;
}

Eigen::MatrixXd hermitian_pairing(const Eigen::MatrixXd& A, const Eigen::MatrixXd& I) {
  const Eigen::MatrixXd Q = A * I;
  return 0.5 * (Q + Q.transpose());
}

double alpha_positivity(const CircleActionSpec& spec, double a, double alpha,
                        std::span<const ConePoint> samples) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0,1]");
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& m : samples) {
    const Eigen::MatrixXd A = ddc_K1a_pow(spec, a, alpha, m);
    const Eigen::MatrixXd I1a = deformed_structure(spec, a, m).I[0];
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hermitian_pairing(A, I1a));
    worst = std::min(worst, es.eigenvalues().minCoeff());
  }
  return worst;
}

double alpha_threshold(const CircleActionSpec& spec, double a, std::span<const ConePoint> samples,
                       double alpha_lo, double alpha_step) {
  double best = 1.0;
  for (double alpha = 1.0; alpha >= alpha_lo - 1e-12; alpha -= alpha_step) {
    if (alpha_positivity(spec, a, alpha, samples) > 0.0)
      best = alpha;
    else
      break;
  }
  return best;
}

}  // namespace tnut
