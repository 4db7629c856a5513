#pragma once

#include "tnut/cone.hpp"
#include "tnut/flow.hpp"

namespace tnut {

/// A point of the twist parametrization mu^{-1}(0) x R^3 -> M.
struct TwistPoint {
  ConePoint m0;        // on mu^{-1}(0)
  Eigen::Vector3d x;   // target moment
  Quaternion qx;       // phi(qx) e1 = x/|x| (identity when x = 0)
};

/// Sp(1) rotation choice for the direction of x.
Quaternion choose_qx(const Eigen::Vector3d& x);

/// Validates mu(m0) = 0 within 1e-10 rho^2 and fixes q_x.
TwistPoint make_twist_point(const ConePoint& m0, const Eigen::Vector3d& x,
                            const CircleActionSpec& spec);

/// Psi(m0, x) = psi_x(m0); the identity on mu^{-1}(0) when x = 0.
ConePoint twist_map(const TwistPoint& tp, const CircleActionSpec& spec, const FlowConfig& cfg);

/// Pullback Psi^* g_a in the frame (h_1..h_{4n-4} | T | e_x1 e_x2 e_x3):
/// horizontal directions of mu^{-1}(0) at m0, the fiber direction, and the
/// three moment directions.  FD Jacobian in the m0 and x slots; the fiber
/// column is exact by equivariance.
struct PullbackMetric {
  Eigen::MatrixXd matrix;
  Eigen::MatrixXd horizontal;  // 4n x (4n-4) frame columns at m0
};

PullbackMetric pullback_metric(const TwistPoint& tp, const CircleActionSpec& spec, double a,
                               const FlowConfig& cfg);

/// Product model a^2 sum dx^2 + g_{0,0,0} + eta^2/a^2 in the same frame.
Eigen::MatrixXd model_metric_matrix(const TwistPoint& tp, const CircleActionSpec& spec, double a);

/// Operator norm of (pullback - model) in the model-orthonormal frame
/// (h_i, a T, e_j/a).  Requires a > 0 and the generic region rho(m0) >= |x|.
double asymptotic_deviation(const TwistPoint& tp, const CircleActionSpec& spec, double a,
                            const FlowConfig& cfg);

/// Numeric g_x-length of the radial segment t -> [t m0], t in [t0, 1];
/// the quantity H(m0, |x|) bounding the quotient distance to the vertex.
double radial_segment_length_gx(const ConePoint& m0, double xnorm, const CircleActionSpec& spec,
                                const FlowConfig& cfg, double t0 = 1e-3);

}  // namespace tnut
