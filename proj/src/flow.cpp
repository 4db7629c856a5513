#include "tnut/flow.hpp"

#include <Eigen/QR>
#include <cmath>

#include "tnut/rng.hpp"

namespace tnut {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = B1 - 5179.0 / 57600, E3 = B3 - 7571.0 / 16695, E4 = B4 - 393.0 / 640,
                 E5 = B5 + 92097.0 / 339200, E6 = B6 - 187.0 / 2100, E7 = -1.0 / 40;

struct StepperState {
  int steps = 0;
  double err_estimate = 0.0;
  FlowStatus status = FlowStatus::Ok;
};

// Integrates y' = rhs(y) from 0 to tau with adaptive DP5(4), PI controller.
// The observer (if set) is called after every accepted step and may stop the
// integration by returning false.
template <typename Rhs, typename Observer>
Eigen::VectorXd integrate(const Rhs& rhs, Eigen::VectorXd y, double tau, const FlowConfig& cfg,
                          StepperState& st, Observer&& observer) {
  if (tau == 0.0) return y;
  const double dir = tau > 0 ? 1.0 : -1.0;
  const double tend = tau;
  double t = 0.0;

  Eigen::VectorXd k1 = rhs(y);
  double h = 0.01 * std::max(1e-8, y.norm()) / std::max(1e-12, k1.norm());
  h = std::min(h, std::abs(tau));
  h *= dir;

  double err_prev = 1.0;
  Eigen::VectorXd k2, k3, k4, k5, k6, k7, ynew, yerr;
  while (dir * (tend - t) > 0.0) {
    if (st.steps++ > cfg.max_steps) {
      st.status = FlowStatus::StepLimit;
      return y;
    }
    if (dir * (t + h - tend) > 0.0) h = tend - t;

    k2 = rhs(y + h * (A21 * k1));
    k3 = rhs(y + h * (A31 * k1 + A32 * k2));
    k4 = rhs(y + h * (A41 * k1 + A42 * k2 + A43 * k3));
    k5 = rhs(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
    k6 = rhs(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
    ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    k7 = rhs(ynew);
    yerr = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);

    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = yerr[i] / sc;
      err += r * r;
    }
    err = std::sqrt(err / static_cast<double>(y.size()));

    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
      st.err_estimate = std::max(st.err_estimate, err * cfg.rel_tol);
      if (y.norm() > cfg.rho_ceiling) {
        st.status = FlowStatus::Blowup;
        return y;
      }
      if (!observer(t, y)) return y;
      const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                         std::pow(std::max(err_prev, 1e-10), 0.4 / 5.0);
      h *= std::clamp(fac, 0.2, 6.0);
      err_prev = std::max(err, 1e-10);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
    }
  }
  return y;
}

struct TrueObserver {
  bool operator()(double, const Eigen::VectorXd&) const { return true; }
};

}  // namespace

FlowResult flow(const ConePoint& m, double tau, const CircleActionSpec& spec, const FlowConfig& cfg) {
  const Eigen::MatrixXd A = -complex_structure(1, spec.n()) * generator_matrix(spec);
  StepperState st;
  auto rhs = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd { return A * y; };
  Eigen::VectorXd y = integrate(rhs, m.coords, tau, cfg, st, TrueObserver{});
  FlowResult r;
  r.endpoint = ConePoint(std::move(y));
  r.tau = tau;
  r.steps = st.steps;
  r.err_estimate = st.err_estimate;
  r.status = st.status;
  return r;
}

FlowJet flow_with_jacobian(const ConePoint& m, double tau, const CircleActionSpec& spec,
                           const FlowConfig& cfg) {
  const int d = m.dim();
  const Eigen::MatrixXd A = -complex_structure(1, spec.n()) * generator_matrix(spec);
  Eigen::VectorXd y0(d * (d + 1));
  y0.head(d) = m.coords;
  Eigen::Map<Eigen::MatrixXd>(y0.data() + d, d, d) = Eigen::MatrixXd::Identity(d, d);
  StepperState st;
  auto rhs = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    Eigen::VectorXd dy(y.size());
    dy.head(d) = A * y.head(d);
    Eigen::Map<Eigen::MatrixXd>(dy.data() + d, d, d) =
        A * Eigen::Map<const Eigen::MatrixXd>(y.data() + d, d, d);
    return dy;
  };
  const Eigen::VectorXd y = integrate(rhs, y0, tau, cfg, st, TrueObserver{});
  FlowJet jet;
  jet.endpoint = ConePoint(y.head(d));
  jet.jacobian = Eigen::Map<const Eigen::MatrixXd>(y.data() + d, d, d);
  jet.tau = tau;
  jet.steps = st.steps;
  jet.status = st.status;
  return jet;
}

ConePoint phi_a(const ConePoint& m, const CircleActionSpec& spec, double a, const FlowConfig& cfg) {
  const double tau = a * a * moment_map(spec, m)[0];
  return flow(m, tau, spec, cfg).endpoint;
}

FlowJet phi_a_with_jacobian(const ConePoint& m, const CircleActionSpec& spec, double a,
                            const FlowConfig& cfg) {
  const double tau = a * a * moment_map(spec, m)[0];
  FlowJet jet = flow_with_jacobian(m, tau, spec, cfg);
  // d Phi_a = dL_tau - I_1 T(end) (x) a^2 dx_1(m)
  const Eigen::VectorXd field = -structure_times_generator(spec, 1, jet.endpoint);
  const Eigen::VectorXd dx1 = -structure_times_generator(spec, 1, m);
  jet.jacobian += field * (a * a * dx1).transpose();
  return jet;
}

PhiInverse phi_a_inverse(const ConePoint& m, const CircleActionSpec& spec, double a,
                         const FlowConfig& cfg) {
  // g(tau) = a^2 x_1(e^tau . m) + tau is strictly increasing with g'(tau) >= 1
  const double a2 = a * a;
  const double g0 = a2 * moment_map(spec, m)[0];
  if (g0 == 0.0) return {m, 0.0};
  const double dir = (g0 > 0.0) ? -1.0 : 1.0;

  // Bracket by doubling with fresh flows from m.  The trajectory grows
  // exponentially past the root, so a blow-up or step-limited flow simply
  // certifies that tau is beyond the root.
  ConePoint cur = m;
  auto eval_fresh = [&](double tau, bool& usable) {
    const FlowResult fr = flow(m, tau, spec, cfg);
    usable = fr.status == FlowStatus::Ok;
    if (usable) cur = fr.endpoint;
    return usable ? a2 * moment_map(spec, fr.endpoint)[0] + tau : dir * (-g0);
  };

  double inner = 0.0;           // g(inner) has the sign of g0
  double outer = dir;           // candidate far side
  int guard = 0;
  while (true) {
    bool usable = true;
    const double g = eval_fresh(outer, usable);
    if (!usable || g * g0 < 0.0) break;  // past the root (or certified past it)
    inner = outer;
    outer *= 2.0;
    if (++guard > 200) throw std::runtime_error("phi_a_inverse: bracketing failed");
  }
  double lo = std::min(inner, outer);
  double hi = std::max(inner, outer);

  // bisect any unevaluable far end back into the flowable zone, then run
  // safeguarded Newton with g'(tau) = 1 + a^2 |T|^2 on incremental flows
  double tau = 0.5 * (lo + hi);
  double tau_cur;
  for (int it = 0;; ++it) {
    bool usable = true;
    const double g = eval_fresh(tau, usable);
    if (usable && g * g0 < 0.0) {
      ((dir < 0) ? lo : hi) = tau;
      tau_cur = tau;
      break;
    }
    if (usable)
      ((dir < 0) ? hi : lo) = tau;  // still on the start side
    else
      ((dir < 0) ? lo : hi) = tau;  // beyond the root
    tau = 0.5 * (lo + hi);
    if (it > 200) throw std::runtime_error("phi_a_inverse: root isolation failed");
  }

  auto eval = [&](double tau_next) {
    const FlowResult fr = flow(cur, tau_next - tau_cur, spec, cfg);
    if (fr.status != FlowStatus::Ok)
      throw std::runtime_error("phi_a_inverse: flow failed during the root search");
    cur = fr.endpoint;
    tau_cur = tau_next;
    return a2 * moment_map(spec, cur)[0] + tau_next;
  };

  for (int it = 0; it < 200; ++it) {
    const double g = eval(tau);
    if (std::abs(g) < 1e-14 * std::max(1.0, m.rho2())) break;
    if (g > 0.0)
      hi = tau;
    else
      lo = tau;
    const double gp = 1.0 + a2 * circle_generator(spec, cur).squaredNorm();
    double next = tau - g / gp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double dtau = std::abs(next - tau);
    tau = next;
    if (dtau < 1e-15 * std::max(1.0, std::abs(tau))) break;
  }
  eval(tau);
  return {cur, tau};
}

PhiInverseJet phi_a_inverse_with_jacobian(const ConePoint& m, const CircleActionSpec& spec, double a,
                                          const FlowConfig& cfg) {
  const PhiInverse inv = phi_a_inverse(m, spec, a, cfg);
  FlowJet jet = flow_with_jacobian(m, inv.tau, spec, cfg);
  // implicit derivative of a^2 x_1(e^tau . m) + tau = 0:
  //   d tau = -a^2 (J^T dx_1(end)) / (1 + a^2 |T(end)|^2)
  const Eigen::VectorXd dx1_end = -structure_times_generator(spec, 1, jet.endpoint);
  const Eigen::VectorXd T_end = circle_generator(spec, jet.endpoint);
  const Eigen::VectorXd dtau =
      -(a * a) * (jet.jacobian.transpose() * dx1_end) / (1.0 + a * a * T_end.squaredNorm());
  const Eigen::VectorXd field = -structure_times_generator(spec, 1, jet.endpoint);
  PhiInverseJet out;
  out.endpoint = jet.endpoint;
  out.jacobian = jet.jacobian + field * dtau.transpose();
  out.tau = inv.tau;
  return out;
}

double tau_to_level(const ConePoint& m0, double x1_target, const CircleActionSpec& spec,
                    const FlowConfig& cfg) {
  const Eigen::Vector3d mu0 = moment_map(spec, m0);
  if (mu0.norm() > 1e-10 * m0.rho2())
    throw std::invalid_argument("tau_to_level: base point is not on mu^{-1}(0)");
  if (x1_target <= 0.0) throw std::invalid_argument("tau_to_level: target must be positive");

  ConePoint cur = m0;
  double tau_cur = 0.0;
  auto x1_at = [&](double tau) {
    cur = flow(cur, tau - tau_cur, spec, cfg).endpoint;
    tau_cur = tau;
    return moment_map(spec, cur)[0];
  };

  double hi = 0.5;
  int guard = 0;
  while (x1_at(hi) < x1_target) {
    hi *= 2.0;
    if (hi > cfg.max_tau || ++guard > 60)
      throw std::runtime_error("tau_to_level: target not reached before max_tau");
  }
  double lo = 0.0;
  double tau = 0.5 * hi;
  for (int it = 0; it < 100; ++it) {
    const double g = x1_at(tau) - x1_target;
    if (std::abs(g) < 1e-13 * std::max(1.0, x1_target)) break;
    if (g > 0.0)
      hi = tau;
    else
      lo = tau;
    const double gp = circle_generator(spec, cur).squaredNorm();
    double next = tau - g / gp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double dtau = std::abs(next - tau);
    tau = next;
    if (dtau < 1e-15 * std::max(1.0, std::abs(tau))) break;
  }
  return tau;
}

ConePoint psi_x(const ConePoint& m0, const Eigen::Vector3d& x, const CircleActionSpec& spec,
                const FlowConfig& cfg) {
  const double r = x.norm();
  if (r == 0.0) return m0;
  const Quaternion qx = rotation_to_axis(x);
  const ConePoint p = sp1_act(qx.conj(), m0);
  const double tau = tau_to_level(p, r, spec, cfg);
  return sp1_act(qx, flow(p, tau, spec, cfg).endpoint);
}

double f_potential(const ConePoint& m0, const Eigen::Vector3d& x, const CircleActionSpec& spec,
                   const FlowConfig& cfg) {
  const double r = x.norm();
  if (r == 0.0) return 0.5 * m0.rho2();
  const Quaternion qx = rotation_to_axis(x);
  const ConePoint p = sp1_act(qx.conj(), m0);
  const double tau = tau_to_level(p, r, spec, cfg);
  const ConePoint end = flow(p, tau, spec, cfg).endpoint;
  return 0.5 * end.rho2() - 2.0 * r * tau;
}

ExpansionFit fit_expansion(const ConePoint& m0, const CircleActionSpec& spec, const FlowConfig& cfg,
                           const std::vector<double>& x1_samples, int degree) {
  const double rho2 = m0.rho2();
  const int cols = degree + 1;
  const int rows = static_cast<int>(x1_samples.size());
  if (rows < cols) throw std::invalid_argument("fit_expansion: not enough samples");

  double smax = 0.0;
  for (double x1 : x1_samples) smax = std::max(smax, std::abs(x1) / rho2);

  // f / rho^2 = sum k_nu s^nu with s = x1/rho^2; columns scaled by smax^nu
  Eigen::MatrixXd Adm(rows, cols);
  Eigen::VectorXd b(rows);
  for (int r = 0; r < rows; ++r) {
    const double s = x1_samples[r] / rho2;
    double col = 1.0;
    for (int c = 0; c < cols; ++c) {
      Adm(r, c) = col;
      col *= s / smax;
    }
    b[r] = f_potential(m0, Eigen::Vector3d(x1_samples[r], 0, 0), spec, cfg) / rho2;
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Adm);
  ExpansionFit fit;
  fit.well_conditioned =
      qr.rank() == cols &&
      std::abs(qr.matrixR()(cols - 1, cols - 1)) > 1e-12 * std::abs(qr.matrixR()(0, 0));
  Eigen::VectorXd coef = qr.solve(b);
  fit.residual = (Adm * coef - b).norm();
  fit.k.resize(cols);
  double scale = 1.0;
  for (int c = 0; c < cols; ++c) {
    fit.k[c] = coef[c] / scale;
    scale *= smax;
  }
  return fit;
}

EdVerdict classify_ed(const ConePoint& m, const Eigen::Vector3d& x, const CircleActionSpec& spec,
                      const FlowConfig& cfg) {
  const double r = x.norm();
  if (r == 0.0) throw std::invalid_argument("classify_ed: x must be nonzero");
  const Eigen::Vector3d mu = moment_map(spec, m);
  if ((mu - x).norm() > 1e-8 * std::max(1.0, m.rho2()))
    throw std::invalid_argument("classify_ed: point not on mu^{-1}(x)");

  const Quaternion qx = rotation_to_axis(x);
  const ConePoint p = sp1_act(qx.conj(), m);
  const double eps_rho = cfg.ed_eps_factor * std::sqrt(r);

  const Eigen::MatrixXd A = -complex_structure(1, spec.n()) * generator_matrix(spec);
  auto rhs = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd { return A * y; };
  StepperState st;
  EdVerdict verdict = EdVerdict::Inconclusive;
  auto observer = [&](double, const Eigen::VectorXd& y) {
    const ConePoint c{Eigen::VectorXd(y)};
    const double x1 = moment_map(spec, c)[0];
    if (x1 <= 0.0) {
      verdict = EdVerdict::Generic;
      return false;
    }
    if (c.rho() < eps_rho) {
      verdict = EdVerdict::Exceptional;
      return false;
    }
    return true;
  };
  integrate(rhs, p.coords, -cfg.ed_max_tau, cfg, st, observer);
  return verdict;
}

QuotientMetricAtPoint quotient_metric(const Eigen::Vector3d& x, const ConePoint& m,
                                      const CircleActionSpec& spec) {
  const Eigen::Vector3d mu = moment_map(spec, m);
  if ((mu - x).norm() > 1e-8 * std::max(1.0, m.rho2()))
    throw std::invalid_argument("quotient_metric: point not on mu^{-1}(x)");
  const int d = m.dim();
  Eigen::MatrixXd B(d, 4);
  B.col(0) = circle_generator(spec, m);
  for (int i = 0; i < 3; ++i) B.col(i + 1) = structure_times_generator(spec, i + 1, m);
  // columns are mutually orthogonal with common norm |T|
  const double t = B.col(0).norm();
  if (t <= 1e-14 * m.rho()) throw std::domain_error("quotient_metric: degenerate action");
  B /= t;
  QuotientMetricAtPoint q;
  q.projector = Eigen::MatrixXd::Identity(d, d) - B * B.transpose();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(B);
  const Eigen::MatrixXd Q = qr.householderQ();
  q.horizontal_basis = Q.rightCols(d - 4);
  q.restriction = q.horizontal_basis.transpose() * q.horizontal_basis;  // = Id for flat g0
  return q;
}

std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> quotient_chart_metric_field(
    const ConePoint& m, const Eigen::Vector3d& x, const CircleActionSpec& spec) {
  const QuotientMetricAtPoint q0 = quotient_metric(x, m, spec);
  const Eigen::MatrixXd H = q0.horizontal_basis;
  const int d = m.dim();
  // correction directions, frozen at the base point
  Eigen::MatrixXd N(d, 3);
  for (int i = 0; i < 3; ++i) N.col(i) = structure_times_generator(spec, i + 1, m);
  const Eigen::VectorXd base = m.coords;
  const Eigen::Vector3d target = x;
  const CircleActionSpec sp = spec;

  return [=](const Eigen::VectorXd& s) -> Eigen::MatrixXd {
    // solve mu(base + H s + N c) = x for c, Newton with exact 3x3 Jacobian
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    ConePoint p(base + H * s);
    for (int it = 0; it < 60; ++it) {
      p = ConePoint(base + H * s + N * c);
      const Eigen::Vector3d res = moment_map(sp, p) - target;
      if (res.norm() < 1e-14 * std::max(1.0, p.rho2())) break;
      const Eigen::Matrix3d Jc = moment_jacobian(sp, p) * N;
      c -= Jc.fullPivLu().solve(res);
    }
    p = ConePoint(base + H * s + N * c);
    // exact chart derivatives: d sigma = H + N dc, dc = -(dmu N)^{-1} (dmu H)
    const Eigen::MatrixXd dmu = moment_jacobian(sp, p);
    const Eigen::Matrix3d Jc = dmu * N;
    const Eigen::MatrixXd dc = -Jc.fullPivLu().solve(dmu * H);
    Eigen::MatrixXd dsigma = H + N * dc;
    // quotient metric: pair horizontal parts (remove the T component)
    const Eigen::VectorXd T = circle_generator(sp, p);
    const Eigen::MatrixXd hor =
        dsigma - T * (T.transpose() * dsigma) / T.squaredNorm();
    Eigen::MatrixXd G = hor.transpose() * hor;
    return 0.5 * (G + G.transpose());
  };
}

ConePoint project_to_moment_level(const ConePoint& guess, const Eigen::Vector3d& x,
                                  const CircleActionSpec& spec, double tol, int max_iter) {
  ConePoint p = guess;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::Vector3d res = moment_map(spec, p) - x;
    if (res.norm() < tol * std::max(1.0, p.rho2())) return p;
    const Eigen::MatrixXd J = moment_jacobian(spec, p);
    const Eigen::Matrix3d JJt = J * J.transpose();
    p = ConePoint(p.coords - J.transpose() * JJt.ldlt().solve(res));
  }
  throw std::runtime_error("project_to_moment_level: no convergence");
}

ConePoint zero_level_point(const CircleActionSpec& spec, uint64_t seed, uint64_t idx,
                           double rho_target) {
  if (spec.n() < 2)
    throw std::invalid_argument("zero_level_point: mu^{-1}(0) is the vertex for n = 1");
  const CounterRng rng(seed, 0x7a31);
  for (uint32_t attempt = 0; attempt < 32; ++attempt) {
    ConePoint p(rng.gaussian_vector(idx, spec.dim(), attempt * 97));
    try {
      p = project_to_moment_level(p, Eigen::Vector3d::Zero(), spec);
      if (p.rho() > 1e-3) return ConePoint(p.coords * (rho_target / p.rho()));
    } catch (const std::runtime_error&) {
      continue;
    }
  }
  throw std::runtime_error("zero_level_point: sampling failed");
}

}  // namespace tnut
