#pragma once

#include <functional>
#include <vector>

#include "tnut/cone.hpp"
#include "tnut/flow.hpp"

namespace tnut {

using MetricField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// g_a as a coordinate metric field on R^{4n}.
MetricField metric_field_ga(const CircleActionSpec& spec, double a);

/// Stereographic chart of the unit round sphere, g = 4/(1+|s|^2)^2 delta;
/// constant sectional curvature +1.  Validation metric for the FD pipeline.
MetricField sphere_chart_field(int dim);

/// Sectional curvature K(span(X,Y)) from finite-difference Christoffel symbols
/// with one Richardson pass (evaluations at h and h/2).  Sets
/// *conditioning_warning when the metric eigenvalue ratio exceeds 1e8.
double sectional_curvature(const MetricField& g, const Eigen::VectorXd& p, const Eigen::VectorXd& X,
                           const Eigen::VectorXd& Y, double h, bool* conditioning_warning = nullptr);

/// Ricci tensor by the same pipeline (Richardson over h, h/2).
Eigen::MatrixXd ricci_tensor(const MetricField& g, const Eigen::VectorXd& p, double h);

struct CurvatureSample {
  Eigen::VectorXd point;
  Eigen::VectorXd plane_x, plane_y;  // g_a-orthonormal
  double K = 0.0;
  double rho_hat = 0.0;
};

/// Distance upper bound rho_hat_a(m): minimum g_a-length over the curve
/// family {straight coordinate segment, radial-then-flow composite}.
double distance_upper(const ConePoint& m, const CircleActionSpec& spec, double a,
                      const FlowConfig& cfg);

/// g_a-length of the straight segment t -> t m, closed form.
double straight_segment_length(const ConePoint& m, const CircleActionSpec& spec, double a);

struct VolumeEstimate {
  double R = 0.0;
  double volume = 0.0;
  double stderr_ = 0.0;
  long long samples = 0;
  uint64_t seed = 0;
};

struct VolumeGrowthResult {
  double slope = 0.0;
  std::vector<VolumeEstimate> estimates;
};

/// Monte-Carlo volume of the potential proxy ball {K_1^a <= R^2} under the
/// g_a volume form (sqrt(det g_a) = 1 + a^2 |T|^2), uniform sampling in the
/// coordinate ball {rho <= sqrt(2) R}; slope of log V against log R.
VolumeGrowthResult volume_growth(const CircleActionSpec& spec, double a,
                                 const std::vector<double>& radii, long long samples, uint64_t seed);

struct GhRow {
  double lambda = 0.0;
  double upper = 0.0;   // lambda-rescaled distance upper bound
  double model = 0.0;   // product-cone distance a |x2 - x1|
  double gap = 0.0;
};

/// Asymptotic-cone probe along a moment segment: for each lambda, the
/// horizontal-curve upper bound between the fibers over x1/lambda and
/// x2/lambda (anchored at m0/lambda when n >= 2), rescaled by lambda,
/// against the product model a |x2 - x1|.  One-sided from above.
std::vector<GhRow> gh_probe(const ConePoint* m0, const Eigen::Vector3d& x1,
                            const Eigen::Vector3d& x2, const std::vector<double>& lambdas,
                            const CircleActionSpec& spec, double a, const FlowConfig& cfg);

/// Point on mu^{-1}(x): q_x . (sqrt(2|x|) e_z1-direction) for n = 1,
/// psi_x from a zero-level point for n >= 2.
ConePoint level_anchor(const CircleActionSpec& spec, const Eigen::Vector3d& x,
                       const FlowConfig& cfg, uint64_t seed = 1);

/// g_a-length of the horizontal lift of the moment segment x1 -> x2 starting
/// at p in mu^{-1}(x1); also returns the endpoint (in mu^{-1}(x2)).
std::pair<double, ConePoint> horizontal_moment_curve(const ConePoint& p, const Eigen::Vector3d& x1,
                                                     const Eigen::Vector3d& x2,
                                                     const CircleActionSpec& spec, double a,
                                                     const FlowConfig& cfg);

}  // namespace tnut
