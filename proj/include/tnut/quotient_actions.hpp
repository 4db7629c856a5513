#pragma once

#include <optional>
#include <vector>

#include "tnut/cone.hpp"

namespace tnut {

/// Constraint manifolds of the homogeneous quotient examples:
///   Sphere: |u| = 1 in H^n
///   NC:     |z|^2 = |w|^2 = 1/2, sum z_a w_a = 0 in H^m  (complex Stiefel)
///   NH:     the l x 4 real frame matrix satisfies U^T U = I/4  (real Stiefel)
///   NHnu:   NH plus nu(u) = sum_b (u_{2b-1} conj(u_{2b}) - u_{2b} conj(u_{2b-1})) = 0
enum class ManifoldTag { Sphere, NC, NH, NHnu };

struct ConstraintPoint {
  ConePoint ambient;
  ManifoldTag tag = ManifoldTag::Sphere;
  Eigen::VectorXd residuals;
};

Eigen::VectorXd constraint_residuals(const ConePoint& p, ManifoldTag tag);

/// Retraction onto the constraint set: closed-form normalization (Sphere),
/// polar decomposition of the frame (NH), Gauss-Newton on the bilinear
/// constraints (NC, NHnu).  Throws on divergence.
ConstraintPoint project_to_manifold(const ConePoint& ambient, ManifoldTag tag);

/// Parallelism defect |T'|^2 |T|^2 - g0(T',T)^2 of the weighted generator
/// against the diagonal generator on NC.  When identity_residual is given it
/// receives |lhs - rhs| for the weight identity
///   sum_{a<b} (a_a - a_b)^2 |u_a|^2 |u_b|^2.
double defect_su(const Eigen::VectorXi& weights, const ConstraintPoint& p,
                 double* identity_residual = nullptr);

struct Sp1DefectResult {
  double defect = 0.0;
  Quaternion q;        // minimizing right-multiplication axis
  double lambda = 0.0; // G2 mode only
};

/// min over unit q in Im(H) of |T'|^2 |T_q|^2 - g0(T', T_q)^2 on NH; the
/// minimizing q is the top eigenvector of the rank-one form c c^T (closed
/// form).  In G2 mode the generator is T' - lambda T with a 1-D search over
/// lambda.
Sp1DefectResult defect_sp1(const Eigen::VectorXi& b, const ConstraintPoint& p, bool g2_mode = false);

/// Brute-force q-grid reference for defect_sp1 (tests and certificates).
double defect_sp1_grid(const Eigen::VectorXi& b, const ConstraintPoint& p, int grid_deg = 2);

enum class Verdict { LocallyFree, NotLocallyFree, Inconclusive };

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  double min_defect = 0.0;
  ConstraintPoint witness;
  int starts = 0;
  std::string note;  // metadata, e.g. quotient label
};

enum class ActionCase { SU, SO, G2, SphereWeighted };

struct SearchSpec {
  ActionCase kind = ActionCase::SU;
  Eigen::VectorXi weights;  // SU: a_1..a_m; SO/G2: b_1..b_s; Sphere: a_1..a_n
  int l = 0;                // SO: ambient H^l; G2 fixes l = 7
};

/// Multi-start projected-gradient minimization of the defect over the
/// constraint manifold.  Verdict thresholds: NotLocallyFree below 1e-10,
/// LocallyFree above 1e-6, Inconclusive between.
Certificate locally_free_search(const SearchSpec& sspec, int starts, uint64_t seed);

/// Exact integer criteria: SU iff all weights distinct; SO iff all |b|
/// distinct; G2 sufficient direction: all b distinct; Sphere iff all nonzero.
bool weights_locally_free_exact(const SearchSpec& sspec);

struct GammaRow {
  int sign = 1;            // gamma T = sign T gamma
  double t_residual = 0.0;
  double x23_residual = 0.0;
  bool pass = false;
};

struct GammaReport {
  bool all_pass = false;
  std::vector<GammaRow> rows;
};

/// Checks gamma T = +-T gamma pointwise and invariance of x_2^2 + x_3^2 for
/// each generator at random points.
GammaReport gamma_compat_check(const std::vector<Eigen::MatrixXd>& generators,
                               const CircleActionSpec& spec, int samples, uint64_t seed);

/// Block-diagonal left/right quaternion multiplication on H^n.
Eigen::MatrixXd left_mult_blockdiag(const Quaternion& q, int n);
Eigen::MatrixXd right_mult_blockdiag(const Quaternion& q, int n);

}  // namespace tnut
