#pragma once

#include "tnut/cone.hpp"
#include "tnut/flow.hpp"

namespace tnut {

/// Value, differential and dd^c (w.r.t. the flat I_1) of a scalar function;
/// the algebra below assembles cutoff products without any nested finite
/// differences.
struct ScalarJet {
  double v = 0.0;
  Eigen::VectorXd d;     // covector
  Eigen::MatrixXd ddc;   // antisymmetric matrix of dd^c_{I_1}
};

/// Chain rule: dd^c(phi o f) = phi'' df ^ d^c f + phi' dd^c f.
ScalarJet jet_compose(const ScalarJet& f, double phi, double dphi, double ddphi, int n);

/// Product rule: dd^c(uv) = u dd^c v + v dd^c u + du ^ d^c v + dv ^ d^c u.
ScalarJet jet_product(const ScalarJet& u, const ScalarJet& v, int n);

/// d^c f = -I_1^T df for the flat structure.
Eigen::VectorXd dc_flat(const Eigen::VectorXd& df, int n);

struct GluingConfig {
  double a = 1.0;
  double c = 1.0;
  double alpha = 0.95;
  double R = 4.0;   // large enough that (2R)^alpha and 2R clear the psi plateau
  double S = 4.0;
  double C_glue = 1.0;
  // Stand-in bump amplitude (0 = trivial omega_Y).  The default is small:
  // the S-seam cut term decays only like S^{-(1-alpha)}, so the doubling
  // search terminates at practical S only when the R-seam C stays near 0.
  double bump_amplitude = 1e-3;
  double bump_radius_factor = 3.0;  // v supported in {K_ALF <= factor * R}
  double omega_Y_scale = 1.0;       // positive part of the stand-in omega_Y, per bump unit
  bool use_psi_plateau = true;      // false: h_1 = K_ALF identically (validation mode)
  FlowConfig flow{};

  void validate() const;
};

/// K_ALF = K_1^a o Phi_a^{-1}.
double k_alf(const CircleActionSpec& spec, double a, const ConePoint& m, const FlowConfig& cfg);

/// Jet of K_ALF via the variational flow: grad = J^T grad K_1^a and
/// dd^c_{I_1} K_ALF = 2 J^T omega_1^a J (the pullback of the deformed form).
ScalarJet k_alf_jet(const CircleActionSpec& spec, double a, const ConePoint& m,
                    const FlowConfig& cfg);

struct Psi3 {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
};

/// The C^2 plateau profile: psi(t) = 3 for t < 2, psi(t) = t for t > 4,
/// quintic blend with psi', psi'' >= 0 everywhere.
Psi3 smoothing_psi(double t);

/// C^2 smoothstep: 0 below 0, 1 above 1.
Psi3 chi_smoothstep(double s);

/// h_alpha = psi((K_ALF)^alpha).
double h_alpha_fn(const CircleActionSpec& spec, double a, double alpha, const ConePoint& m,
                  const FlowConfig& cfg);

enum class GluingRegion { Inner, SeamR, Middle, SeamS, Outer };

/// All i del delbar pieces of the glued form at one point.  The stand-in
/// omega_Y is i ddbar of A (scale W(K_ALF) - bump), with W' = 1 up to 2R and
/// stepping down to 0 across [2R, 3R]: a positive form on {K_ALF < 2R} that
/// equals -i ddbar v outside {K_ALF <= 3R}.
struct GluingTerms {
  ScalarJet kalf;
  Eigen::MatrixXd omega_Y;
  Eigen::MatrixXd zeta_v;         // i ddbar (zeta v)
  Eigen::MatrixXd cut_h_alpha;    // i ddbar ((1 - zeta_S) h_alpha)
  Eigen::MatrixXd h_one;          // i ddbar h_1
  Eigen::MatrixXd omega_alf;      // i ddbar K_ALF = (Phi_a^{-1})^* omega_1^a
  GluingRegion region = GluingRegion::Inner;
};

GluingTerms assemble_terms(const ConePoint& m, const GluingConfig& cfg,
                           const CircleActionSpec& spec);

struct OmegaHat {
  Eigen::MatrixXd W;
  GluingRegion region = GluingRegion::Inner;
  double k_alf = 0.0;
};

/// omega_hat = omega_Y + i ddbar(zeta v) + C i ddbar((1-zeta_S) h_alpha)
///           + c i ddbar h_1.
OmegaHat omega_hat(const ConePoint& m, const GluingConfig& cfg, const CircleActionSpec& spec);

/// Doubling search on C then S until the minimum generalized eigenvalue of
/// omega_hat against c * omega_alf on both transition regions exceeds 1e-6.
/// Returns the selected pair and updates cfg.
std::pair<double, double> select_CS(GluingConfig& cfg, const CircleActionSpec& spec,
                                    int sample_budget, uint64_t seed);

/// f_hat = log of the ratio of Omega ^ bar(Omega) against (omega_hat/c)^{2n},
/// normalized so that the flat structure gives 0.  Rejects non-positive
/// omega_hat.
double ricci_potential_fhat(const ConePoint& m, const GluingConfig& cfg,
                            const CircleActionSpec& spec);

/// Top coefficient of Omega ^ bar(Omega) with Omega = (omega_2 + i omega_3)^n
/// for the flat structure (the holomorphic volume pairing).
double holomorphic_volume_pairing(int n);

/// Minimum eigenvalue of omega_hat paired with I_1, relative to the local
/// scale c * omega_alf (generalized eigenvalue).
double omega_hat_min_eig(const OmegaHat& oh, const GluingTerms& terms, double c);

/// Deterministic sample with K_ALF in [lo, hi]: bisection along a random ray.
ConePoint sample_kalf_band(const CircleActionSpec& spec, const GluingConfig& cfg, double lo,
                           double hi, uint64_t seed, uint64_t idx);

}  // namespace tnut
