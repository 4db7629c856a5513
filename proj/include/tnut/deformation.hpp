#pragma once

#include <array>
#include <complex>
#include <span>

#include "tnut/cone.hpp"

namespace tnut {

/// The deformed hyperkahler data (g_a, I_i^a, omega_i^a) at one point,
/// stored as dense matrices.  Conventions:
///   omega_i(X,Y) = X^T W_i Y = g(I_i X, Y),  dx_i = -(I_i T)^T.
struct StructureAtPoint {
  Eigen::MatrixXd g;
  std::array<Eigen::MatrixXd, 3> I;
  std::array<Eigen::MatrixXd, 3> omega;
  double a = 0.0;
  ConePoint base;
};

/// Evaluate the deformed structure
///   g_a      = g0 + a^2 sum_i dx_i (x) dx_i + (1/(V+a^2) - 1/V) eta (x) eta
///   I_i^a    = I_i - (a^2 V/(a^2+V)) (I_i T)(x)theta + a^2 T (x) dx_i
///   omega_i^a = omega_i + a^2 dx_j ^ dx_k
/// Requires T(m) != 0.
StructureAtPoint deformed_structure(const CircleActionSpec& spec, double a, const ConePoint& m);

/// Flat structure (g0, I_i, omega_i) of H^n at m.
StructureAtPoint undeformed_structure(int n, const ConePoint& m);

/// K_1^a = rho^2/2 + a^2 x_1^2 + (a^2/2)(x_2^2 + x_3^2).
double potential_K1a(const CircleActionSpec& spec, double a, const ConePoint& m);

/// Exact gradient of K_1^a (the moment differentials are closed-form).
Eigen::VectorXd potential_K1a_grad(const CircleActionSpec& spec, double a, const ConePoint& m);

/// d^c_{I_1^a} K_1^a as a covector, beta(X) = -dK(I_1^a X).
Eigen::VectorXd potential_K1a_dc(const CircleActionSpec& spec, double a, const ConePoint& m);

/// dd^c_{I_1^a} K_1^a = 2 omega_1^a (closed form).
Eigen::MatrixXd ddc_K1a(const CircleActionSpec& spec, double a, const ConePoint& m);

/// dd^c_{I_1^a} (K_1^a)^alpha via the composition rule
///   dd^c(K^alpha) = alpha K^(alpha-2) [ (alpha-1) dK ^ d^cK + K dd^cK ].
Eigen::MatrixXd ddc_K1a_pow(const CircleActionSpec& spec, double a, double alpha, const ConePoint& m);

/// Psi_j = alpha - i a^2 alpha(T) dx_j, of type (1,0) for I_j^a whenever alpha
/// is (1,0) for I_j.  Throws if the input fails the (1,0) precondition.
Eigen::VectorXcd deformed_one_form(const Eigen::VectorXcd& alpha, int axis,
                                   const CircleActionSpec& spec, double a, const ConePoint& m);

struct DecompositionReport {
  double g_residual = 0.0;
  std::array<double, 3> omega_residual{};
  double projector_residual = 0.0;  // |P^2 - P|
};

/// Reconstructs g_a and omega_i^a from the orthogonal projection onto
/// span(T, I_1 T, I_2 T, I_3 T)^perp plus the V, eta, dx_i blocks and reports
/// the max entrywise residuals.
DecompositionReport decomposition_check(const CircleActionSpec& spec, double a, const ConePoint& m);

/// Same reconstruction for an arbitrary constant generator field T on flat
/// H^n (covers the translation field d/dq0 with V = 1, dx_i = -(I_i T)^T).
DecompositionReport decomposition_check_field(int n, const Eigen::VectorXd& T);

/// Smallest pointwise constant with
///   (dK(X))^2 + (d^c K(X))^2 <= C K g_a(X,X) for all X,
/// computed as the top eigenvalue of the rank-2 pencil.
double dkdck_pointwise(const CircleActionSpec& spec, double a, const ConePoint& m);

/// Max of dkdck_pointwise over a sample set.
double dkdck_bound(const CircleActionSpec& spec, double a, std::span<const ConePoint> samples);

/// Minimum over samples of the smallest eigenvalue of the Hermitian pairing
/// sym(dd^c (K_1^a)^alpha . I_1^a); positive means dd^c(K^alpha) > 0.
double alpha_positivity(const CircleActionSpec& spec, double a, double alpha,
                        std::span<const ConePoint> samples);

/// Smallest alpha on a descending grid from 1.0 with alpha_positivity > 0.
double alpha_threshold(const CircleActionSpec& spec, double a, std::span<const ConePoint> samples,
                       double alpha_lo = 0.5, double alpha_step = 0.05);

/// Hermitian pairing sym(A * I) of a 2-form matrix A with a complex structure;
/// A is positive as a (1,1)-form iff this matrix is positive definite.
Eigen::MatrixXd hermitian_pairing(const Eigen::MatrixXd& A, const Eigen::MatrixXd& I);

}  // namespace tnut
