// Acceptance suite: one line per criterion, exit 0 iff all pass.
// Desk scale: n in {1,2}, fixed seeds, every tolerance pinned in code.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tnut/deformation.hpp"
#include "tnut/fd.hpp"
#include "tnut/gluing.hpp"
#include "tnut/probes.hpp"
#include "tnut/quotient_actions.hpp"
#include "tnut/rng.hpp"
#include "tnut/twist.hpp"

using namespace tnut;

namespace {

int g_failures = 0;

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int idx, const std::string& name, bool pass, const std::string& detail, double secs) {
  std::printf("[%s] criterion %2d: %-34s %s  (%.1fs)\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
              detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

const FlowConfig kFlow{};

// ---------------------------------------------------------------- criterion 1
void criterion_algebraic() {
  Stopwatch sw;
  const CounterRng rng(7);
  double worst = 0.0;
  const std::vector<CircleActionSpec> specs = {
      CircleActionSpec::standard(1), CircleActionSpec::of({3}), CircleActionSpec::standard(2),
      CircleActionSpec::of({1, 2})};
  for (const auto& spec : specs) {
    const int n = spec.n();
    const auto id = Eigen::MatrixXd::Identity(4 * n, 4 * n);
    for (double a : {0.0, 0.5, 1.0, 2.0}) {
      for (uint64_t t = 0; t < 1000; ++t) {
        const ConePoint m = rng.cone_point(t, n);
        const StructureAtPoint s = deformed_structure(spec, a, m);
        worst = std::max({worst, (s.I[0] * s.I[1] - s.I[2]).cwiseAbs().maxCoeff(),
                          (s.I[1] * s.I[2] - s.I[0]).cwiseAbs().maxCoeff(),
                          (s.I[2] * s.I[0] - s.I[1]).cwiseAbs().maxCoeff()});
        for (int i = 0; i < 3; ++i) {
          worst = std::max(worst, (s.I[i] * s.I[i] + id).cwiseAbs().maxCoeff());
          worst = std::max(worst, (s.omega[i] - s.I[i].transpose() * s.g).cwiseAbs().maxCoeff());
        }
        const ConnectionData c = connection_data(spec, m);
        worst = std::max(worst, std::abs(c.eta.dot(c.T) - 1.0));
        const Quaternion q = rng.unit_quaternion(t, 64);
        worst =
            std::max(worst, (moment_map(spec, sp1_act(q, m)) -
                             covering_phi(q) * moment_map(spec, m)).cwiseAbs().maxCoeff());
      }
    }
  }
  report(1, "algebraic identity suite", worst < 1e-9, fmt("max residual %.2e (tol 1e-9)", worst),
         sw.s());
}

// ---------------------------------------------------------------- criterion 2
void criterion_differential() {
  Stopwatch sw;
  const CounterRng rng(11);
  double w_closed = 0, w_moment = 0, w_ddc = 0, w_typing = 0;
  for (int n : {1, 2}) {
    const auto spec = (n == 1) ? CircleActionSpec::standard(1) : CircleActionSpec::of({1, 2});
    for (double a : {0.0, 1.0, 2.0}) {
      for (uint64_t t = 0; t < 3; ++t) {
        const ConePoint m = rng.cone_point(t, n, 0.9, 1.1);
        for (int i = 0; i < 3; ++i) {
          auto W = [&](const Eigen::VectorXd& c) {
            return deformed_structure(spec, a, ConePoint(c)).omega[i];
          };
          w_closed = std::max(w_closed, fd_three_form_residual_richardson(W, m.coords, 1e-3));
          auto xi = [&](const Eigen::VectorXd& c) { return moment_map(spec, ConePoint(c))[i]; };
          const Eigen::VectorXd g1 = fd_gradient(xi, m.coords, 1e-3);
          const Eigen::VectorXd g2 = fd_gradient(xi, m.coords, 5e-4);
          const Eigen::VectorXd grad = (4.0 * g2 - g1) / 3.0;
          const Eigen::VectorXd iota =
              deformed_structure(spec, a, m).omega[i].transpose() * circle_generator(spec, m);
          w_moment = std::max(w_moment, (grad + iota).cwiseAbs().maxCoeff());
        }
        auto beta = [&](const Eigen::VectorXd& c) {
          return potential_K1a_dc(spec, a, ConePoint(c));
        };
        const Eigen::MatrixXd d1 = fd_exterior_of_one_form(beta, m.coords, 1e-3);
        const Eigen::MatrixXd d2 = fd_exterior_of_one_form(beta, m.coords, 5e-4);
        const Eigen::MatrixXd ddc = richardson2(d1, d2);
        w_ddc = std::max(
            w_ddc, (0.5 * ddc - deformed_structure(spec, a, m).omega[0]).cwiseAbs().maxCoeff());

        // deformed (1,0) typing for dz_1
        Eigen::VectorXcd dz = Eigen::VectorXcd::Zero(4 * n);
        dz[0] = 1.0;
        dz[1] = std::complex<double>(0, 1);
        const Eigen::VectorXcd psi = deformed_one_form(dz, 1, spec, a, m);
        const Eigen::MatrixXcd I1a =
            deformed_structure(spec, a, m).I[0].cast<std::complex<double>>();
        w_typing = std::max(
            w_typing,
            ((I1a.transpose() * psi) - std::complex<double>(0, 1) * psi).cwiseAbs().maxCoeff());
      }
    }
  }
  const double worst = std::max({w_closed, w_moment, w_ddc, w_typing});
  report(2, "differential identity suite", worst < 1e-6,
         fmt("d-closedness %.1e, moment %.1e, ddc %.1e", w_closed, w_moment, w_ddc), sw.s());
}

// ---------------------------------------------------------------- criterion 3
void criterion_flow_oracle() {
  Stopwatch sw;
  const auto spec = CircleActionSpec::standard(2);
  const CounterRng rng(13);
  double worst = 0.0;
  for (uint64_t t = 0; t < 25; ++t) {
    const ConePoint m0 = zero_level_point(spec, 13, t);
    const double r2 = m0.rho2();
    const double tau = 0.1 + 1.8 * rng.u01(t, 3);
    const ConePoint end = flow(m0, tau, spec, kFlow).endpoint;
    worst = std::max(worst, std::abs(end.rho2() - oracle::tc_rho2(r2, tau)) / r2);
    worst = std::max(worst, std::abs(moment_map(spec, end)[0] - oracle::tc_x1(r2, tau)) / r2);
    const double x1 = 0.1 + 1.5 * rng.u01(t, 5);
    worst = std::max(worst, std::abs(tau_to_level(m0, x1, spec, kFlow) - oracle::tc_tau(r2, x1)));
    worst = std::max(
        worst, std::abs(f_potential(m0, {x1, 0, 0}, spec, kFlow) - oracle::tc_f(r2, x1)));
  }
  bool pass = worst < 1e-8;

  const ConePoint m0 = zero_level_point(spec, 13, 2);
  std::vector<double> xs;
  for (int i = 1; i <= 12; ++i) xs.push_back(0.05 * m0.rho2() * i / 12.0);
  const ExpansionFit fit = fit_expansion(m0, spec, kFlow, xs);
  pass = pass && fit.well_conditioned && std::abs(fit.k[0] - 0.5) < 1e-6 &&
         std::abs(fit.k[1]) < 1e-5 && std::abs(fit.k[2] + 1.0) < 1e-3;
  report(3, "Taubian-Calabi flow oracle", pass,
         fmt("flow/level/f err %.2e; k=(%.6f,%.2e", worst, fit.k[0], fit.k[1]) +
             fmt(",%.4f)", fit.k[2]),
         sw.s());
}

// ---------------------------------------------------------------- criterion 4
void criterion_biholomorphism() {
  Stopwatch sw;
  const CounterRng rng(17);
  double w_holo = 0, w_symp = 0, w_round = 0;
  int count = 0;
  for (int n : {1, 2}) {
    const auto spec = (n == 1) ? CircleActionSpec::standard(1) : CircleActionSpec::of({1, 2});
    const double a = 0.8;
    for (uint64_t t = 0; t < 100; ++t) {
      const ConePoint m = rng.cone_point(t, n, 0.8, 1.3);
      auto F = [&](const Eigen::VectorXd& c) { return phi_a(ConePoint(c), spec, a, kFlow).coords; };
      const Eigen::MatrixXd J = fd_jacobian(F, m.coords, 1e-5);
      const StructureAtPoint s = deformed_structure(spec, a, m);
      const StructureAtPoint f = undeformed_structure(n, phi_a(m, spec, a, kFlow));
      w_holo = std::max(w_holo, (J * s.I[0] - f.I[0] * J).cwiseAbs().maxCoeff());
      w_symp = std::max(w_symp, (J.transpose() * f.omega[1] * J - s.omega[1]).cwiseAbs().maxCoeff());
      const ConePoint fwd = phi_a(m, spec, a, kFlow);
      w_round = std::max(w_round,
                         (phi_a_inverse(fwd, spec, a, kFlow).endpoint.coords - m.coords).norm() /
                             m.rho());
      ++count;
    }
  }
  report(4, "biholomorphism/symplectomorphism", w_holo < 1e-6 && w_symp < 1e-6 && w_round < 1e-8,
         fmt("dPhi I residual %.1e, pullback %.1e, round %.1e", w_holo, w_symp, w_round), sw.s());
}

// ---------------------------------------------------------------- criterion 5
void criterion_estimates() {
  Stopwatch sw;
  const auto spec = CircleActionSpec::of({1, 2});
  const CounterRng rng(19);

  auto fit_pair = [](double c1, double c2) { return std::abs(c1 - c2) / std::max(c1, c2); };

  // tau <= C x1/rho^2 and rho^2 increase <= C x1^2/rho^2 on two scales
  double ctau[2] = {0, 0}, crho[2] = {0, 0};
  for (int w = 0; w < 2; ++w) {
    const double scale = (w == 0) ? 1.0 : std::sqrt(10.0);  // rho^2 spans one decade
    for (uint64_t t = 0; t < 12; ++t) {
      const ConePoint m0 = zero_level_point(spec, 19, t, scale);
      const double r2 = m0.rho2();
      for (double s : {0.05, 0.2, 0.8}) {
        const double x1 = s * r2;
        const double tau = tau_to_level(m0, x1, spec, kFlow);
        const ConePoint end = flow(m0, tau, spec, kFlow).endpoint;
        ctau[w] = std::max(ctau[w], tau * r2 / x1);
        crho[w] = std::max(crho[w], (end.rho2() - r2) * r2 / (x1 * x1));
      }
    }
  }

  // rho_hat <= C rho^2 on two scales (n = 1 ray family)
  const auto std1 = CircleActionSpec::standard(1);
  double cdist[2] = {0, 0};
  for (int w = 0; w < 2; ++w) {
    for (uint64_t t = 0; t < 6; ++t) {
      const ConePoint m = rng.cone_point(t, 1, 10.0 * (w ? 10.0 : 1.0), 30.0 * (w ? 10.0 : 1.0));
      cdist[w] = std::max(cdist[w], distance_upper(m, std1, 1.0, kFlow) / m.rho2());
    }
  }

  // Cauchy-Schwarz slack
  double slack = 0.0;
  for (uint64_t t = 0; t < 3000; ++t) {
    const ConePoint m = rng.cone_point(t, 2);
    const Eigen::Vector3d x = moment_map(spec, m);
    const double bound = m.rho2() * circle_generator(spec, m).squaredNorm();
    for (int i = 0; i < 3; ++i) slack = std::max(slack, 4.0 * x[i] * x[i] - bound);
  }

  // dK ^ d^cK <= C K dd^cK on two saturated windows a decade apart
  std::vector<ConePoint> w1, w2;
  for (uint64_t t = 0; t < 150; ++t) {
    w1.push_back(rng.cone_point(t, 2, 2.0, 20.0));
    w2.push_back(w1.back().scaled(10.0));
  }
  const double ck1 = dkdck_bound(spec, 1.0, w1);
  const double ck2 = dkdck_bound(spec, 1.0, w2);

  const bool pass = fit_pair(ctau[0], ctau[1]) < 0.15 && fit_pair(crho[0], crho[1]) < 0.15 &&
                    fit_pair(cdist[0], cdist[1]) < 0.15 && slack <= 1e-12 &&
                    fit_pair(ck1, ck2) < 0.15;
  report(5, "estimate lemmas, fitted constants", pass,
         fmt("C_tau drift %.1f%%, C_rho %.1f%%, ", 100 * fit_pair(ctau[0], ctau[1]),
             100 * fit_pair(crho[0], crho[1])) +
             fmt("C_dist %.1f%%, C_dk %.1f%%", 100 * fit_pair(cdist[0], cdist[1]),
                 100 * fit_pair(ck1, ck2)),
         sw.s());
}

// ---------------------------------------------------------------- criterion 6
void criterion_curvature() {
  Stopwatch sw;
  // pipeline validation gates first
  Eigen::VectorXd p0(4);
  p0 << 0.2, -0.4, 0.1, 0.3;
  Eigen::VectorXd X = Eigen::VectorXd::Zero(4), Y = Eigen::VectorXd::Zero(4);
  X[0] = 1;
  Y[1] = 1;
  const MetricField flat4 = [](const Eigen::VectorXd& p) {
    return Eigen::MatrixXd::Identity(p.size(), p.size());
  };
  const double kflat = std::abs(sectional_curvature(flat4, p0, X, Y, 1e-3));
  const double ksph = sectional_curvature(sphere_chart_field(4), p0, X, Y, 1e-3);
  bool pass = kflat < 1e-6 && std::abs(ksph - 1.0) < 1e-4;

  double growth[2] = {0, 0}, growth0 = 0;
  int idx = 0;
  for (int n : {1, 2}) {
    const auto spec = CircleActionSpec::standard(n);
    const MetricField ga = metric_field_ga(spec, 1.0);
    const MetricField g0f = metric_field_ga(spec, 0.0);
    const CounterRng rng(23 + n);
    const Eigen::VectorXd dir = rng.unit_vector(1, 4 * n);
    double running = 0, prev = -1, running0 = 0, prev0 = -1;
    for (double lo = 1.0; lo < 100.0; lo *= 2.0) {
      double oct = 0, oct0 = 0;
      for (int i = 0; i < 3; ++i) {
        const double rho = lo * std::pow(2.0, i / 3.0);
        const ConePoint m{Eigen::VectorXd(rho * dir)};
        const Eigen::MatrixXd g = ga(m.coords);
        for (int plane = 0; plane < 2; ++plane) {
          Eigen::VectorXd Xp = Eigen::VectorXd::Zero(4 * n), Yp = Eigen::VectorXd::Zero(4 * n);
          Xp[plane] = 1;
          Yp[plane + 1] = 1;
          Xp /= std::sqrt(Xp.dot(g * Xp));
          Yp -= Xp * Xp.dot(g * Yp);
          Yp /= std::sqrt(Yp.dot(g * Yp));
          const double h = 1e-4 * std::max(1.0, rho);
          const double K = sectional_curvature(ga, m.coords, Xp, Yp, h);
          const double rho_hat = distance_upper(m, spec, 1.0, kFlow);
          oct = std::max(oct, std::abs(K) * rho_hat);
          if (n == 1) {
            const double K0 = sectional_curvature(g0f, m.coords, Xp, Yp, h);
            oct0 = std::max(oct0, std::abs(K0) * m.rho2());
          }
        }
      }
      running = std::max(running, oct);
      running0 = std::max(running0, oct0);
      if (lo >= 10.0 && prev > 0.0) growth[idx] = std::max(growth[idx], running / prev - 1.0);
      if (n == 1 && lo >= 10.0 && prev0 > 0.0) growth0 = std::max(growth0, running0 / prev0 - 1.0);
      prev = running;
      prev0 = running0;
    }
    ++idx;
  }
  pass = pass && growth[0] < 0.10 && growth[1] < 0.10 && growth0 < 0.10;
  report(6, "curvature decay scan", pass,
         fmt("validation K=(%.1e, 1%+.1e); ", kflat, ksph - 1.0) +
             fmt("growth n1 %.1e n2 %.1e a0 %.1e", growth[0], growth[1], growth0),
         sw.s());
}

// ---------------------------------------------------------------- criterion 7
void criterion_volume() {
  Stopwatch sw;
  const auto std1 = CircleActionSpec::standard(1);
  const auto std2 = CircleActionSpec::standard(2);
  const auto v0 = volume_growth(std1, 0.0, {10, 20, 40, 80}, 2000000, 7);
  const auto v1 = volume_growth(std1, 1.0, {10, 20, 40, 80}, 2000000, 7);
  // n = 2: the proxy region is a codimension-3 tube whose coordinate fraction
  // falls like 1/R^3, so the radii sit where 1e7 uniform samples still land
  // >= 1000 effective hits
  const auto v2 = volume_growth(std2, 1.0, {4, 8, 16, 32}, 10000000, 7);
  const bool pass = std::abs(v0.slope - 4.0) < 0.1 && std::abs(v1.slope - 3.0) < 0.15 &&
                    std::abs(v2.slope - 7.0) < 0.3;
  report(7, "volume growth slopes", pass,
         fmt("a=0: %.3f (4); n=1: %.3f (3); n=2: %.3f (7)", v0.slope, v1.slope, v2.slope), sw.s());
}

// ---------------------------------------------------------------- criterion 8
void criterion_asymptotic_metric() {
  Stopwatch sw;
  const auto spec = CircleActionSpec::standard(2);
  const ConePoint base = zero_level_point(spec, 29, 1);
  const Eigen::Vector3d x(0.5, -0.3, 0.1);
  double running = 0, prev = -1, growth = 0;
  for (double rho : {4.0, 8.0, 16.0, 32.0, 64.0}) {
    const TwistPoint tp = make_twist_point(base.scaled(rho), x, spec);
    const double dev = asymptotic_deviation(tp, spec, 1.0, kFlow);
    const double rho_hat = distance_upper(twist_map(tp, spec, kFlow), spec, 1.0, kFlow);
    running = std::max(running, dev * rho_hat * rho_hat);
    if (prev > 0.0) growth = std::max(growth, running / prev - 1.0);
    prev = running;
  }
  report(8, "asymptotic comparison (n=2 rate)", growth < 0.10,
         fmt("running max growth %.2e per octave", growth), sw.s());
}

// ---------------------------------------------------------------- criterion 9
void criterion_asymptotic_cone() {
  Stopwatch sw;
  const auto spec = CircleActionSpec::standard(1);
  const Eigen::Vector3d x1(1.0, 0, 0), x2(0.3, 0.6, -0.2);
  const auto rows = gh_probe(nullptr, x1, x2, {1.0, 0.1, 0.01}, spec, 1.0, kFlow);
  const bool monotone = rows[1].gap < rows[0].gap && rows[2].gap < rows[1].gap;
  const double rel = rows[2].gap / rows[2].model;
  report(9, "asymptotic cone probe (n=1)", monotone && rel < 0.05 && rows[0].gap > 0.0,
         fmt("gaps %.3f / %.4f / %.5f", rows[0].gap, rows[1].gap, rows[2].gap), sw.s());
}

// --------------------------------------------------------------- criterion 10
void criterion_locally_free() {
  Stopwatch sw;
  SearchSpec su;
  su.kind = ActionCase::SU;
  su.weights = Eigen::VectorXi(3);
  su.weights << 1, 2, 3;
  const Certificate good = locally_free_search(su, 64, 7);

  SearchSpec su_rep = su;
  su_rep.weights << 1, 2, 2;
  const Certificate bad = locally_free_search(su_rep, 64, 7);
  const double su_off_mass = bad.witness.ambient.quat(0).norm2();

  SearchSpec so;
  so.kind = ActionCase::SO;
  so.l = 5;
  so.weights = Eigen::VectorXi(2);
  so.weights << 1, 1;
  const Certificate so_bad = locally_free_search(so, 64, 7);
  const double so_off_mass = so_bad.witness.ambient.quat(4).norm2();

  const CounterRng rng(31);
  double wid = 0.0;
  Eigen::VectorXi w(4);
  w << 2, -1, 3, 7;
  for (uint64_t t = 0; t < 10000; ++t) {
    const ConstraintPoint p =
        project_to_manifold(ConePoint(rng.gaussian_vector(t, 16)), ManifoldTag::NC);
    double r = 0.0;
    defect_su(w, p, &r);
    wid = std::max(wid, r);
  }
  Eigen::VectorXi b(2);
  b << 1, 2;
  double wgrid = 0.0;
  for (uint64_t t = 0; t < 50; ++t) {
    const ConstraintPoint p =
        project_to_manifold(rng.cone_point(t, 5, 0.5, 2.0), ManifoldTag::NH);
    wgrid = std::max(wgrid, defect_sp1(b, p).defect - defect_sp1_grid(b, p, 2));
  }

  const bool pass = good.verdict == Verdict::LocallyFree && good.min_defect > 1e-6 &&
                    bad.verdict == Verdict::NotLocallyFree && bad.min_defect < 1e-12 &&
                    su_off_mass < 1e-5 && so_bad.verdict == Verdict::NotLocallyFree &&
                    so_bad.min_defect < 1e-12 && so_off_mass < 1e-5 && wid < 1e-12 &&
                    wgrid < 1e-8;
  report(10, "locally-free certificates", pass,
         fmt("SU+ %.1e, SU- %.1e, ", good.min_defect, bad.min_defect) +
             fmt("SO- %.1e, id %.1e, grid %.1e", so_bad.min_defect, wid, wgrid),
         sw.s());
}

// --------------------------------------------------------------- criterion 11
void criterion_gluing() {
  Stopwatch sw;
  const auto spec = CircleActionSpec::standard(1);
  GluingConfig g;
  g.a = 1.0;
  g.c = 1.0;
  g.alpha = 0.95;

  const auto [C, S] = select_CS(g, spec, 200000, 7);
  bool pass = std::isfinite(C) && std::isfinite(S);

  const std::array<std::pair<double, double>, 5> bands = {{{0.05, 2.0 * g.R},
                                                           {2.0 * g.R, 3.0 * g.R},
                                                           {3.0 * g.R, 2.0 * g.S * g.R},
                                                           {2.0 * g.S * g.R, 3.0 * g.S * g.R},
                                                           {3.0 * g.S * g.R, 9.0 * g.S * g.R}}};
  double min_eig = std::numeric_limits<double>::infinity();
  for (size_t bnd = 0; bnd < bands.size(); ++bnd) {
    for (long long i = 0; i < 2000; ++i) {
      const ConePoint m =
          sample_kalf_band(spec, g, bands[bnd].first, bands[bnd].second, 7 + bnd, i);
      const GluingTerms t = assemble_terms(m, g, spec);
      OmegaHat oh;
      oh.W = t.omega_Y + t.zeta_v + g.C_glue * t.cut_h_alpha + g.c * t.h_one;
      min_eig = std::min(min_eig, omega_hat_min_eig(oh, t, g.c));
    }
  }
  pass = pass && min_eig > 0.0;

  double worst_f = 0.0;
  for (long long i = 0; i < 400; ++i) {
    const ConePoint m = sample_kalf_band(spec, g, 3.2 * g.S * g.R, 12.0 * g.S * g.R, 77, i);
    worst_f = std::max(worst_f, std::abs(ricci_potential_fhat(m, g, spec)));
  }
  pass = pass && worst_f < 1e-7;

  // S-decay slope of the cut term against i ddbar h_1
  std::vector<double> Ss = {8, 16, 32, 64}, sups;
  for (double Sv : Ss) {
    GluingConfig gs = g;
    gs.S = Sv;
    double sup = 0.0;
    for (long long i = 0; i < 24; ++i) {
      const ConePoint m =
          sample_kalf_band(spec, gs, 2.0 * Sv * gs.R, 3.0 * Sv * gs.R, 83, i);
      const GluingTerms t = assemble_terms(m, gs, spec);
      const Eigen::MatrixXd I1 = complex_structure(1, 1);
      const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
          hermitian_pairing(t.cut_h_alpha, I1), hermitian_pairing(t.h_one, I1));
      sup = std::max(sup, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    sups.push_back(sup);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < Ss.size(); ++i) {
    sx += std::log(Ss[i]);
    sy += std::log(sups[i]);
    sxx += std::log(Ss[i]) * std::log(Ss[i]);
    sxy += std::log(Ss[i]) * std::log(sups[i]);
  }
  const double slope =
      (Ss.size() * sxy - sx * sy) / (Ss.size() * sxx - sx * sx);
  pass = pass && std::abs(slope + (1.0 - g.alpha)) < 0.1;

  report(11, "gluing construction", pass,
         fmt("C=%g S=%g, ", C, S) + fmt("min eig %.2e, f_hat %.1e, ", min_eig, worst_f) +
             fmt("S-slope %.3f (-%.2f)", slope, 1.0 - g.alpha),
         sw.s());
}

// --------------------------------------------------------------- criterion 12
void criterion_positivity() {
  Stopwatch sw;
  const CounterRng rng(37);
  bool pass = true;
  double ahat = 1.0;
  for (int n : {1, 2}) {
    const auto spec = CircleActionSpec::standard(n);
    std::vector<ConePoint> pts;
    for (uint64_t t = 0; t < 10000; ++t) pts.push_back(rng.cone_point(t, n, 0.1, 5.0));
    pass = pass && alpha_positivity(spec, 1.0, 1.0, pts) > 0.0;
    pass = pass && alpha_positivity(spec, 1.0, 0.95, pts) > 0.0;
    ahat = std::min(ahat, alpha_threshold(spec, 1.0, pts));
  }
  report(12, "dd^c(K^alpha) positivity threshold", pass,
         fmt("alpha in {0.95, 1} positive; empirical alpha_0 <= %.2f", ahat), sw.s());
}

}  // namespace

int main() {
  Stopwatch total;
  criterion_algebraic();
  criterion_differential();
  criterion_flow_oracle();
  criterion_biholomorphism();
  criterion_estimates();
  criterion_curvature();
  criterion_volume();
  criterion_asymptotic_metric();
  criterion_asymptotic_cone();
  criterion_locally_free();
  criterion_gluing();
  criterion_positivity();
  std::printf("%d/12 criteria passed (%.1fs total)\n", 12 - g_failures, total.s());
  return g_failures == 0 ? 0 : 1;
}
