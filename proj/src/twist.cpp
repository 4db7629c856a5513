#include "tnut/twist.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "tnut/deformation.hpp"

namespace tnut {

Quaternion choose_qx(const Eigen::Vector3d& x) { return rotation_to_axis(x); }

TwistPoint make_twist_point(const ConePoint& m0, const Eigen::Vector3d& x,
                            const CircleActionSpec& spec) {
  if (moment_map(spec, m0).norm() > 1e-10 * m0.rho2())
    throw std::invalid_argument("make_twist_point: m0 is not on mu^{-1}(0)");
  TwistPoint tp;
  tp.m0 = m0;
  tp.x = x;
  tp.qx = (x.norm() == 0.0) ? Quaternion::one() : choose_qx(x);
  return tp;
}

ConePoint twist_map(const TwistPoint& tp, const CircleActionSpec& spec, const FlowConfig& cfg) {
  if (tp.x.norm() == 0.0) return tp.m0;
  return psi_x(tp.m0, tp.x, spec, cfg);
}

namespace {

// g0-orthonormal basis of ker(dmu) ∩ T^perp at a zero-level point
Eigen::MatrixXd horizontal_frame(const CircleActionSpec& spec, const ConePoint& m0) {
  const int d = m0.dim();
  Eigen::MatrixXd B(d, 4);
  B.col(0) = circle_generator(spec, m0);
  for (int i = 0; i < 3; ++i) B.col(i + 1) = structure_times_generator(spec, i + 1, m0);
  B /= B.col(0).norm();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  const Eigen::MatrixXd Q = qr.householderQ();
  return Q.rightCols(d - 4);
}

Eigen::MatrixXd pullback_in_frame(const TwistPoint& tp, const CircleActionSpec& spec, double a,
                                  const FlowConfig& cfg, const Eigen::MatrixXd& H,
                                  double fiber_scale, double x_scale) {
  const int d = tp.m0.dim();
  const int hd = static_cast<int>(H.cols());
  const int total = hd + 1 + 3;

  FlowConfig tight = cfg;
  tight.rel_tol = std::min(cfg.rel_tol, 1e-12);
  tight.abs_tol = std::min(cfg.abs_tol, 1e-13);

  auto psi_of = [&](const ConePoint& m0, const Eigen::Vector3d& x) {
    return psi_x(m0, x, spec, tight);
  };

  const ConePoint center = psi_of(tp.m0, tp.x);
  Eigen::MatrixXd cols(d, total);

  // m0-horizontal directions: symmetric difference with projection back to mu^{-1}(0)
  const double hm = 1e-4 * tp.m0.rho();
  for (int i = 0; i < hd; ++i) {
    const ConePoint mp =
        project_to_moment_level(ConePoint(tp.m0.coords + hm * H.col(i)), Eigen::Vector3d::Zero(), spec);
    const ConePoint mm =
        project_to_moment_level(ConePoint(tp.m0.coords - hm * H.col(i)), Eigen::Vector3d::Zero(), spec);
    cols.col(i) = (psi_of(mp, tp.x).coords - psi_of(mm, tp.x).coords) / (2.0 * hm);
  }

  // fiber direction is exact: dPsi(T(m0)) = T(Psi)
  cols.col(hd) = fiber_scale * circle_generator(spec, center);

  // moment directions
  const double hx = 1e-4 * std::max(1.0, tp.x.norm());
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d xp = tp.x, xm = tp.x;
    xp[j] += hx;
    xm[j] -= hx;
    cols.col(hd + 1 + j) = x_scale * (psi_of(tp.m0, xp).coords - psi_of(tp.m0, xm).coords) / (2.0 * hx);
  }

  const Eigen::MatrixXd ga = deformed_structure(spec, a, center).g;
  Eigen::MatrixXd P = cols.transpose() * ga * cols;
  return 0.5 * (P + P.transpose());
}

}  // namespace

PullbackMetric pullback_metric(const TwistPoint& tp, const CircleActionSpec& spec, double a,
                               const FlowConfig& cfg) {
  PullbackMetric pm;
  pm.horizontal = horizontal_frame(spec, tp.m0);
  pm.matrix = pullback_in_frame(tp, spec, a, cfg, pm.horizontal, 1.0, 1.0);
  return pm;
}

Eigen::MatrixXd model_metric_matrix(const TwistPoint& tp, const CircleActionSpec& spec, double a) {
  if (a <= 0.0) throw std::invalid_argument("model_metric_matrix: requires a > 0");
  const Eigen::MatrixXd H = horizontal_frame(spec, tp.m0);
  const int hd = static_cast<int>(H.cols());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(hd + 4, hd + 4);
  M.topLeftCorner(hd, hd).setIdentity();           // cone block in an orthonormal frame
  M(hd, hd) = 1.0 / (a * a);                        // fiber block eta^2/a^2, eta(T) = 1
  M.bottomRightCorner(3, 3) = a * a * Eigen::Matrix3d::Identity();
  return M;
}

double asymptotic_deviation(const TwistPoint& tp, const CircleActionSpec& spec, double a,
                            const FlowConfig& cfg) {
  if (a <= 0.0) throw std::invalid_argument("asymptotic_deviation: requires a > 0");
  if (tp.m0.rho() < tp.x.norm())
    throw std::invalid_argument("asymptotic_deviation: point outside the generic region");
  const Eigen::MatrixXd H = horizontal_frame(spec, tp.m0);
  // frame (h_i, a T, e_j/a) makes the model the identity
  const Eigen::MatrixXd P = pullback_in_frame(tp, spec, a, cfg, H, a, 1.0 / a);
  const int total = static_cast<int>(P.rows());
  const Eigen::MatrixXd D = P - Eigen::MatrixXd::Identity(total, total);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double radial_segment_length_gx(const ConePoint& m0, double xnorm, const CircleActionSpec& spec,
                                const FlowConfig& cfg, double t0) {
  if (xnorm <= 0.0) throw std::invalid_argument("radial_segment_length_gx: |x| > 0 required");
  const Eigen::Vector3d x(xnorm, 0, 0);
  auto speed = [&](double t) {
    const ConePoint mt = m0.scaled(t);
    const double h = 1e-5 * t;
    const ConePoint pp = psi_x(m0.scaled(t + h), x, spec, cfg);
    const ConePoint pmn = psi_x(m0.scaled(t - h), x, spec, cfg);
    Eigen::VectorXd v = (pp.coords - pmn.coords) / (2.0 * h);
    // quotient speed: remove the fiber component at the image point
    const ConePoint img = psi_x(mt, x, spec, cfg);
    const Eigen::VectorXd T = circle_generator(spec, img);
    v -= T * (T.dot(v) / T.squaredNorm());
    return v.norm();
  };
  // composite Simpson on [t0, 1]
  const int nq = 64;  // even
  const double dt = (1.0 - t0) / nq;
  double L = speed(t0) + speed(1.0);
  for (int i = 1; i < nq; ++i) L += speed(t0 + i * dt) * ((i % 2) ? 4.0 : 2.0);
  return L * dt / 3.0;
}

}  // namespace tnut
