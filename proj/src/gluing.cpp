#include "tnut/gluing.hpp"

#include <Eigen/Eigenvalues>

#include "tnut/deformation.hpp"
#include "tnut/exterior.hpp"
#include "tnut/rng.hpp"

namespace tnut {

void GluingConfig::validate() const {
  if (!(a >= 0.0) || !(c > 0.0)) throw std::invalid_argument("gluing config: need a >= 0, c > 0");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("gluing config: alpha in (0,1]");
  if (!(R > 0.0 && S > 2.0)) throw std::invalid_argument("gluing config: need R > 0, S > 2");
  // region ordering 0 < 2R < 3R < 2SR < 3SR
  if (!(3.0 * R < 2.0 * S * R)) throw std::invalid_argument("gluing config: region overlap");
  // the cutoff bands must sit beyond the psi plateaus so that h_alpha and h_1
  // are pure powers there ("R sufficiently large")
  if (use_psi_plateau && (2.0 * R < 4.0 || std::pow(2.0 * R, alpha) < 4.0))
    throw std::invalid_argument("gluing config: R too small for the plateau profiles");
}

Eigen::VectorXd dc_flat(const Eigen::VectorXd& df, int n) {
  // d^c f = -df o I_1; as a covector this is -I_1^T df = I_1 df (I_1 is skew)
  Eigen::VectorXd out(df.size());
  for (int a = 0; a < n; ++a) {
    const double* u = df.data() + 4 * a;
    out[4 * a] = -u[1];
    out[4 * a + 1] = u[0];
    out[4 * a + 2] = -u[3];
    out[4 * a + 3] = u[2];
  }
  return out;
}

ScalarJet jet_compose(const ScalarJet& f, double phi, double dphi, double ddphi, int n) {
  ScalarJet out;
  out.v = phi;
  out.d = dphi * f.d;
  const Eigen::VectorXd dcf = dc_flat(f.d, n);
  out.ddc = ddphi * wedge(f.d, dcf) + dphi * f.ddc;
  return out;
}

ScalarJet jet_product(const ScalarJet& u, const ScalarJet& v, int n) {
  ScalarJet out;
  out.v = u.v * v.v;
  out.d = u.v * v.d + v.v * u.d;
  out.ddc = u.v * v.ddc + v.v * u.ddc + wedge(u.d, dc_flat(v.d, n)) + wedge(v.d, dc_flat(u.d, n));
  return out;
}

double k_alf(const CircleActionSpec& spec, double a, const ConePoint& m, const FlowConfig& cfg) {
  const PhiInverse inv = phi_a_inverse(m, spec, a, cfg);
  return potential_K1a(spec, a, inv.endpoint);
}

ScalarJet k_alf_jet(const CircleActionSpec& spec, double a, const ConePoint& m,
                    const FlowConfig& cfg) {
  const PhiInverseJet inv = phi_a_inverse_with_jacobian(m, spec, a, cfg);
  ScalarJet jet;
  jet.v = potential_K1a(spec, a, inv.endpoint);
  jet.d = inv.jacobian.transpose() * potential_K1a_grad(spec, a, inv.endpoint);
  const Eigen::MatrixXd W1a = deformed_structure(spec, a, inv.endpoint).omega[0];
  jet.ddc = 2.0 * inv.jacobian.transpose() * W1a * inv.jacobian;
  return jet;
}

Psi3 smoothing_psi(double t) {
  Psi3 p;
  if (t <= 2.0) {
    p.v = 3.0;
    return p;
  }
  if (t >= 4.0) {
    p.v = t;
    p.d1 = 1.0;
    return p;
  }
  const double s = 0.5 * (t - 2.0);
  p.v = 3.0 + 2.0 * s * s * s - s * s * s * s;  // quintic-free blend 2s^3 - s^4
  p.d1 = 3.0 * s * s - 2.0 * s * s * s;
  p.d2 = 3.0 * s - 3.0 * s * s;
  return p;
}

Psi3 chi_smoothstep(double s) {
  Psi3 p;
  if (s <= 0.0) return p;
  if (s >= 1.0) {
    p.v = 1.0;
    return p;
  }
  p.v = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  p.d1 = 30.0 * s * s * (1.0 - s) * (1.0 - s);
  p.d2 = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
  return p;
}

namespace {

// bump profile (1 - u^2)^3 on |u| < 1 with derivatives in u
Psi3 bump_profile(double u) {
  Psi3 p;
  const double w = 1.0 - u * u;
  if (w <= 0.0) return p;
  p.v = w * w * w;
  p.d1 = -6.0 * u * w * w;
  p.d2 = -6.0 * w * w + 24.0 * u * u * w;
  return p;
}

GluingRegion region_of(double K, const GluingConfig& cfg) {
  const double R = cfg.R, S = cfg.S;
  if (K < 2.0 * R) return GluingRegion::Inner;
  if (K <= 3.0 * R) return GluingRegion::SeamR;
  if (K < 2.0 * S * R) return GluingRegion::Middle;
  if (K <= 3.0 * S * R) return GluingRegion::SeamS;
  return GluingRegion::Outer;
}

}  // namespace

double h_alpha_fn(const CircleActionSpec& spec, double a, double alpha, const ConePoint& m,
                  const FlowConfig& cfg) {
  const double K = k_alf(spec, a, m, cfg);
  return smoothing_psi(std::pow(K, alpha)).v;
}

GluingTerms assemble_terms(const ConePoint& m, const GluingConfig& cfg,
                           const CircleActionSpec& spec) {
  cfg.validate();
  const int n = spec.n();
  GluingTerms t;
  t.kalf = k_alf_jet(spec, cfg.a, m, cfg.flow);
  const double K = t.kalf.v;
  t.region = region_of(K, cfg);
  t.omega_alf = 0.5 * t.kalf.ddc;

  // v = A bump(K / (factor R))
  const double rv = cfg.bump_radius_factor * cfg.R;
  const Psi3 b = bump_profile(K / rv);
  const ScalarJet v_jet = jet_compose(t.kalf, cfg.bump_amplitude * b.v,
                                      cfg.bump_amplitude * b.d1 / rv,
                                      cfg.bump_amplitude * b.d2 / (rv * rv), n);

  // omega_Y = A i ddbar(scale W(K) - bump profile), W' = 1 - chi((K-2R)/R):
  // strictly positive where the bump lives, identically -i ddbar v past 3R
  const double eY = cfg.bump_amplitude * cfg.omega_Y_scale;
  const Psi3 cw = chi_smoothstep((K - 2.0 * cfg.R) / cfg.R);
  const ScalarJet w_jet =
      jet_compose(t.kalf, 0.0 /*value unused*/, eY * (1.0 - cw.v), -eY * cw.d1 / cfg.R, n);
  t.omega_Y = 0.5 * w_jet.ddc - 0.5 * v_jet.ddc;

  // zeta = chi((K - 2R)/R)
  const Psi3 chi = chi_smoothstep((K - 2.0 * cfg.R) / cfg.R);
  const ScalarJet zeta = jet_compose(t.kalf, chi.v, chi.d1 / cfg.R, chi.d2 / (cfg.R * cfg.R), n);
  t.zeta_v = 0.5 * jet_product(zeta, v_jet, n).ddc;

  // h_alpha = psi(K^alpha)
  const double al = cfg.alpha;
  const double Ka = std::pow(K, al);
  const Psi3 ps = smoothing_psi(Ka);
  const double dKa = al * std::pow(K, al - 1.0);
  const double ddKa = al * (al - 1.0) * std::pow(K, al - 2.0);
  const ScalarJet h_alpha =
      jet_compose(t.kalf, ps.v, ps.d1 * dKa, ps.d2 * dKa * dKa + ps.d1 * ddKa, n);

  // (1 - zeta_S) h_alpha with zeta_S = chi((K/S - 2R)/R)
  const double SR = cfg.S * cfg.R;
  const Psi3 chis = chi_smoothstep((K - 2.0 * SR) / SR);
  ScalarJet one_minus_zs =
      jet_compose(t.kalf, 1.0 - chis.v, -chis.d1 / SR, -chis.d2 / (SR * SR), n);
  t.cut_h_alpha = 0.5 * jet_product(one_minus_zs, h_alpha, n).ddc;

  // h_1
  if (cfg.use_psi_plateau) {
    const Psi3 p1 = smoothing_psi(K);
    const ScalarJet h1 = jet_compose(t.kalf, p1.v, p1.d1, p1.d2, n);
    t.h_one = 0.5 * h1.ddc;
  } else {
    t.h_one = 0.5 * t.kalf.ddc;
  }
  return t;
}

OmegaHat omega_hat(const ConePoint& m, const GluingConfig& cfg, const CircleActionSpec& spec) {
  const GluingTerms t = assemble_terms(m, cfg, spec);
  OmegaHat oh;
  oh.W = t.omega_Y + t.zeta_v + cfg.C_glue * t.cut_h_alpha + cfg.c * t.h_one;
  oh.region = t.region;
  oh.k_alf = t.kalf.v;
  return oh;
}

double omega_hat_min_eig(const OmegaHat& oh, const GluingTerms& terms, double c) {
  const int n = static_cast<int>(oh.W.rows()) / 4;
  const Eigen::MatrixXd I1 = complex_structure(1, n);
  const Eigen::MatrixXd Sh = hermitian_pairing(oh.W, I1);
  const Eigen::MatrixXd Sref = hermitian_pairing(c * terms.omega_alf, I1);
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Sh, Sref);
  return es.eigenvalues().minCoeff();
}

ConePoint sample_kalf_band(const CircleActionSpec& spec, const GluingConfig& cfg, double lo,
                           double hi, uint64_t seed, uint64_t idx) {
  const CounterRng rng(seed, 0xba17d);
  FlowConfig loose = cfg.flow;
  loose.rel_tol = 1e-9;
  loose.abs_tol = 1e-11;
  const Eigen::VectorXd dir = rng.unit_vector(idx, spec.dim());
  auto K_at = [&](double t) { return k_alf(spec, cfg.a, ConePoint(t * dir), loose); };

  double t_hi = 1.0;
  int guard = 0;
  while (K_at(t_hi) < hi) {
    t_hi *= 2.0;
    if (++guard > 60) throw std::runtime_error("sample_kalf_band: band not reached");
  }
  double t_lo = t_hi;
  while (K_at(t_lo) > lo) {
    t_lo *= 0.5;
    if (++guard > 120) throw std::runtime_error("sample_kalf_band: band not bracketed");
  }
  // bisect the two ends of the band (K is increasing along rays)
  auto bisect = [&](double target) {
    double a = t_lo, b = t_hi;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (a + b);
      ((K_at(mid) > target) ? b : a) = mid;
    }
    return 0.5 * (a + b);
  };
  const double ta = bisect(lo);
  const double tb = bisect(hi);
  const double t = ta + (tb - ta) * rng.u01(idx, 61);
  return ConePoint(t * dir);
}

std::pair<double, double> select_CS(GluingConfig& cfg, const CircleActionSpec& spec,
                                    int sample_budget, uint64_t seed) {
  cfg.validate();
  const int per_round = 32;
  int used = 0;
  const double margin = 1e-6;

  auto sample_band_terms = [&](double lo, double hi, uint64_t stream) {
    std::vector<GluingTerms> terms;
    terms.reserve(per_round);
    for (int i = 0; i < per_round; ++i) {
      const ConePoint m = sample_kalf_band(spec, cfg, lo, hi, seed + stream, i);
      terms.push_back(assemble_terms(m, cfg, spec));
      used += 1;
    }
    return terms;
  };
  auto min_eig_with = [&](const std::vector<GluingTerms>& terms, double C) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
      OmegaHat oh;
      oh.W = t.omega_Y + t.zeta_v + C * t.cut_h_alpha + cfg.c * t.h_one;
      oh.region = t.region;
      worst = std::min(worst, omega_hat_min_eig(oh, t, cfg.c));
    }
    return worst;
  };

  // C first, on {2R <= K <= 3R}; the sampled terms do not depend on C, so the
  // band is sampled once.  C = 0 is legitimate when the bump is trivial.
  {
    const auto terms = sample_band_terms(2.0 * cfg.R, 3.0 * cfg.R, 1);
    double C = 0.0;
    while (min_eig_with(terms, C) <= margin) {
      C = (C == 0.0) ? 1.0 : 2.0 * C;
      if (C > 1e12) throw std::runtime_error("select_CS: C diverged on the R-seam");
    }
    cfg.C_glue = C;
  }
  if (used > sample_budget) throw std::runtime_error("select_CS: budget exhausted on the R-seam");

  // then S on {2SR <= K <= 3SR}; the band moves with S
  while (true) {
    const auto terms = sample_band_terms(2.0 * cfg.S * cfg.R, 3.0 * cfg.S * cfg.R, 2);
    if (min_eig_with(terms, cfg.C_glue) > margin) break;
    cfg.S *= 2.0;
    if (used > sample_budget)
      throw std::runtime_error("select_CS: budget exhausted on the S-seam");
  }
  return {cfg.C_glue, cfg.S};
}

double holomorphic_volume_pairing(int n) {
  const Eigen::MatrixXcd W2 = flat_kahler_form(2, n).cast<std::complex<double>>();
  const Eigen::MatrixXcd W3 = flat_kahler_form(3, n).cast<std::complex<double>>();
  const std::complex<double> top = top_omega_pair(W2 + std::complex<double>(0, 1) * W3, n);
  return std::abs(top);
}

double ricci_potential_fhat(const ConePoint& m, const GluingConfig& cfg,
                            const CircleActionSpec& spec) {
  const int n = spec.n();
  const OmegaHat oh = omega_hat(m, cfg, spec);
  // positivity gate
  const Eigen::MatrixXd I1 = complex_structure(1, n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hermitian_pairing(oh.W, I1));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::domain_error("ricci_potential_fhat: omega_hat is not positive here");

  const double num = holomorphic_volume_pairing(n);
  const Eigen::MatrixXcd Wc = (oh.W / cfg.c).cast<std::complex<double>>();
  const double den = std::abs(top_wedge_power(Wc, 2 * n));
  // normalization: the flat reference ratio makes f_hat vanish when
  // omega_hat/c is the flat Kahler form
  const double ref =
      std::abs(top_wedge_power(flat_kahler_form(1, n).cast<std::complex<double>>(), 2 * n));
  return std::log((num / den) * (ref / num));
}

}  // namespace tnut
