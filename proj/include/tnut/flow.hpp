#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tnut/cone.hpp"
#include "tnut/deformation.hpp"

namespace tnut {

struct FlowConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_tau = 60.0;
  int max_steps = 200000;
  double rho_ceiling = 1e12;
  // classify_ed stopping policy
  double ed_eps_factor = 1e-4;  // eps_rho = factor * sqrt(|x|)
  double ed_max_tau = 40.0;
};

enum class FlowStatus { Ok, StepLimit, Blowup };

struct FlowResult {
  ConePoint endpoint;
  double tau = 0.0;
  int steps = 0;
  double err_estimate = 0.0;
  FlowStatus status = FlowStatus::Ok;
};

/// Flow of m' = -I_1 T(m) for time tau (tau may be negative), adaptive
/// Dormand-Prince 5(4) with PI step-size control.
FlowResult flow(const ConePoint& m, double tau, const CircleActionSpec& spec, const FlowConfig& cfg);

struct FlowJet {
  ConePoint endpoint;
  Eigen::MatrixXd jacobian;  // d(e^tau . m)/dm at fixed tau
  double tau = 0.0;
  int steps = 0;
  FlowStatus status = FlowStatus::Ok;
};

/// Flow together with the variational equation J' = A(m) J.
FlowJet flow_with_jacobian(const ConePoint& m, double tau, const CircleActionSpec& spec,
                           const FlowConfig& cfg);

/// Phi_a(m) = (a^2 x_1(m)) . m (flow for time a^2 x_1).
ConePoint phi_a(const ConePoint& m, const CircleActionSpec& spec, double a, const FlowConfig& cfg);
FlowJet phi_a_with_jacobian(const ConePoint& m, const CircleActionSpec& spec, double a,
                            const FlowConfig& cfg);

struct PhiInverse {
  ConePoint endpoint;
  double tau = 0.0;  // solves a^2 x_1(e^tau . m) + tau = 0
};

/// Inverse of Phi_a by safeguarded Newton on the strictly increasing map
/// tau -> a^2 x_1(e^tau . m) + tau.
PhiInverse phi_a_inverse(const ConePoint& m, const CircleActionSpec& spec, double a,
                         const FlowConfig& cfg);

struct PhiInverseJet {
  ConePoint endpoint;
  Eigen::MatrixXd jacobian;
  double tau = 0.0;
};

PhiInverseJet phi_a_inverse_with_jacobian(const ConePoint& m, const CircleActionSpec& spec, double a,
                                          const FlowConfig& cfg);

/// Unique tau > 0 with x_1(e^tau . m0) = x1_target for m0 in mu^{-1}(0),
/// x1_target > 0; bracketing plus Newton with dx_1/dtau = |T|^2.
double tau_to_level(const ConePoint& m0, double x1_target, const CircleActionSpec& spec,
                    const FlowConfig& cfg);

/// psi_x(m0) = q_x e^{tau(q_x^{-1} m0, |x|)} . (q_x^{-1} m0) in mu^{-1}(x).
ConePoint psi_x(const ConePoint& m0, const Eigen::Vector3d& x, const CircleActionSpec& spec,
                const FlowConfig& cfg);

/// f_x(m0) = rho^2(endpoint)/2 - 2 |x| tau.
double f_potential(const ConePoint& m0, const Eigen::Vector3d& x, const CircleActionSpec& spec,
                   const FlowConfig& cfg);

struct ExpansionFit {
  Eigen::VectorXd k;  // k_0 .. k_degree, normalized as f = sum k_nu x1^nu / rho^{2 nu - 2}
  double residual = 0.0;
  bool well_conditioned = true;
};

/// Least-squares fit of f_{x1,0,0}(m0) against powers of x1/rho^2 at fixed m0.
ExpansionFit fit_expansion(const ConePoint& m0, const CircleActionSpec& spec, const FlowConfig& cfg,
                           const std::vector<double>& x1_samples, int degree = 4);

enum class EdVerdict { Exceptional, Generic, Inconclusive };

/// Backward flow classification of m in mu^{-1}(x): Exceptional when the
/// trajectory sinks to the vertex with x_1 > 0 throughout, Generic when x_1
/// crosses 0 first, Inconclusive when neither happens before ed_max_tau.
EdVerdict classify_ed(const ConePoint& m, const Eigen::Vector3d& x, const CircleActionSpec& spec,
                      const FlowConfig& cfg);

struct QuotientMetricAtPoint {
  Eigen::MatrixXd horizontal_basis;  // 4n x (4n-4), g0-orthonormal columns
  Eigen::MatrixXd projector;         // onto {T}^perp ∩ ker d(mu)
  Eigen::MatrixXd restriction;       // metric in the basis (identity for g0)
};

/// Restriction of g0 to the horizontal space {T}^perp ∩ ker d(mu) at
/// m in mu^{-1}(x); the quotient hyperkahler metric seen from m.
QuotientMetricAtPoint quotient_metric(const Eigen::Vector3d& x, const ConePoint& m,
                                      const CircleActionSpec& spec);

/// Local chart s in R^{4n-4} -> quotient metric matrix: the section through m
/// solves mu = x with corrections along I_i T(m), derivatives are exact via
/// implicit differentiation.  Feeds the finite-difference curvature pipeline.
std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> quotient_chart_metric_field(
    const ConePoint& m, const Eigen::Vector3d& x, const CircleActionSpec& spec);

/// Gauss-Newton projection onto the moment level set mu = x.
ConePoint project_to_moment_level(const ConePoint& guess, const Eigen::Vector3d& x,
                                  const CircleActionSpec& spec, double tol = 1e-13, int max_iter = 60);

/// Deterministic sample of mu^{-1}(0) with rho = rho_target (n >= 2).
ConePoint zero_level_point(const CircleActionSpec& spec, uint64_t seed, uint64_t idx,
                           double rho_target = 1.0);

}  // namespace tnut
