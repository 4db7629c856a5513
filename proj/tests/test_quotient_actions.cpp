#include <doctest.h>

#include "tnut/quotient_actions.hpp"
#include "tnut/rng.hpp"

using namespace tnut;

namespace {

ConePoint from_quats(std::initializer_list<Quaternion> qs) {
  ConePoint p(Eigen::VectorXd::Zero(4 * static_cast<int>(qs.size())));
  int i = 0;
  for (const auto& q : qs) p.set_quat(i++, q);
  return p;
}

const Quaternion kHalf(0.5, 0, 0, 0);
const Quaternion kHalfI(0, 0.5, 0, 0);
const Quaternion kHalfJ(0, 0, 0.5, 0);
const Quaternion kHalfK(0, 0, 0, 0.5);
const Quaternion kZero(0, 0, 0, 0);

}  // namespace

TEST_CASE("projection onto the constraint sets") {
  const CounterRng rng(401);

  // a point already on NC is fixed
  ConePoint nc(Eigen::VectorXd::Zero(8));
  nc.set_zw(0, {std::sqrt(0.5), 0}, {0, 0});
  nc.set_zw(1, {0, 0}, {std::sqrt(0.5), 0});
  const ConstraintPoint cp = project_to_manifold(nc, ManifoldTag::NC);
  CHECK((cp.ambient.coords - nc.coords).norm() < 1e-12);

  // random ambient points project with tiny residuals
  for (uint64_t t = 0; t < 25; ++t) {
    const ConePoint a2 = rng.cone_point(t, 3);
    CHECK(project_to_manifold(a2, ManifoldTag::NC).residuals.cwiseAbs().maxCoeff() < 1e-10);
    const ConePoint a5 = rng.cone_point(t, 5, 0.5, 2.0);
    CHECK(project_to_manifold(a5, ManifoldTag::NH).residuals.cwiseAbs().maxCoeff() < 1e-10);
    const ConePoint a7 = rng.cone_point(t, 7, 0.5, 2.0);
    CHECK(project_to_manifold(a7, ManifoldTag::NHnu).residuals.cwiseAbs().maxCoeff() < 1e-10);
  }

  // the SO(l) proof point lies on NH (l = 5)
  const ConePoint so_pt =
      from_quats({kHalf, -1.0 * kHalfI, kHalfJ, kHalfK, kZero});
  const ConstraintPoint so_cp = project_to_manifold(so_pt, ManifoldTag::NH);
  CHECK((so_cp.ambient.coords - so_pt.coords).norm() < 1e-12);

  // the G2 proof point lies on N_nu (l = 7)
  const ConePoint g2_pt =
      from_quats({kHalf, kHalfI, kHalfK, kHalfJ, kZero, kZero, kZero});
  CHECK(constraint_residuals(g2_pt, ManifoldTag::NHnu).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("SU defect and the weight identity") {
  // m = 2, a = (1,2), |u_1|^2 = |u_2|^2 = 1/2 -> defect (1-2)^2/4 = 0.25
  ConePoint p(Eigen::VectorXd::Zero(8));
  p.set_zw(0, {std::sqrt(0.5), 0}, {0, 0});
  p.set_zw(1, {0, 0}, {std::sqrt(0.5), 0});
  ConstraintPoint cp;
  cp.ambient = p;
  cp.tag = ManifoldTag::NC;
  Eigen::VectorXi a12(2);
  a12 << 1, 2;
  double idres = 0.0;
  CHECK(defect_su(a12, cp, &idres) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(idres < 1e-14);

  // equal weights vanish at the two-component witness
  Eigen::VectorXi a11(2);
  a11 << 1, 1;
  CHECK(defect_su(a11, cp) == doctest::Approx(0.0).epsilon(1e-14));

  // identity residual < 1e-12 and nonnegativity at random NC points
  const CounterRng rng(409);
  Eigen::VectorXi w(4);
  w << 2, -1, 3, 7;
  double worst = 0.0;
  for (uint64_t t = 0; t < 10000; ++t) {
    ConePoint q(rng.gaussian_vector(t, 16));
    const ConstraintPoint cq = project_to_manifold(q, ManifoldTag::NC);
    double res = 0.0;
    const double d = defect_su(w, cq, &res);
    CHECK(d >= -1e-14);
    worst = std::max(worst, res);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("Sp(1) defect: closed form vs grid and the SO witness") {
  const CounterRng rng(419);
  Eigen::VectorXi b(2);
  b << 1, 2;
  for (uint64_t t = 0; t < 40; ++t) {
    const ConstraintPoint p = project_to_manifold(rng.cone_point(t, 5, 0.5, 2.0), ManifoldTag::NH);
    const double closed = defect_sp1(b, p).defect;
    const double grid = defect_sp1_grid(b, p, 2);
    // the closed form is the true minimum: never above the grid value, and
    // the grid can overshoot only by its angular resolution
    CHECK(closed <= grid + 1e-8);
    CHECK(grid - closed < 2e-3 * std::max(1.0, p.ambient.rho2()));
  }

  // distinct |b| on l = 5: positive at random points
  Eigen::VectorXi b123(2);
  b123 << 1, 2;
  double minpos = 1e300;
  for (uint64_t t = 0; t < 1000; ++t) {
    const ConstraintPoint p = project_to_manifold(rng.cone_point(t, 5, 0.5, 2.0), ManifoldTag::NH);
    minpos = std::min(minpos, defect_sp1(b123, p).defect);
  }
  CHECK(minpos > 0.0);

  // b = (1,1): the explicit degenerate frame has vanishing defect with q = i
  const ConePoint w = from_quats({kHalf, -1.0 * kHalfI, kHalfJ, kHalfK, kZero});
  ConstraintPoint cw;
  cw.ambient = w;
  cw.tag = ManifoldTag::NH;
  Eigen::VectorXi b11(2);
  b11 << 1, 1;
  const Sp1DefectResult r = defect_sp1(b11, cw);
  CHECK(r.defect < 1e-12);
  CHECK(std::abs(std::abs(r.q.q1) - 1.0) < 1e-8);  // q = +-i

  // rotational invariance under the centralizer O(l): permute frame entries
  Eigen::VectorXi b12(2);
  b12 << 1, 2;
  for (uint64_t t = 0; t < 20; ++t) {
    const ConstraintPoint p = project_to_manifold(rng.cone_point(t, 5, 0.5, 2.0), ManifoldTag::NH);
    ConePoint rp = p.ambient;
    rp.set_quat(4, p.ambient.quat(4));  // identity relabel outside the active blocks
    // O(l) element acting only on the last (weight-0) coordinate: sign flip
    rp.set_quat(4, -1.0 * p.ambient.quat(4));
    ConstraintPoint crp;
    crp.ambient = rp;
    crp.tag = ManifoldTag::NH;
    CHECK(defect_sp1(b12, crp).defect ==
          doctest::Approx(defect_sp1(b12, p).defect).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("locally free searches") {
  // SU, m = 3, distinct weights: locally free
  SearchSpec su;
  su.kind = ActionCase::SU;
  su.weights.resize(3);
  su.weights << 1, 2, 3;
  const Certificate c1 = locally_free_search(su, 16, 5);
  CHECK(c1.verdict == Verdict::LocallyFree);
  CHECK(c1.min_defect > 1e-6);
  CHECK(weights_locally_free_exact(su));

  // SU with a repeated weight: not locally free, witness concentrates on the pair
  SearchSpec su_bad = su;
  su_bad.weights << 1, 2, 2;
  const Certificate c2 = locally_free_search(su_bad, 16, 5);
  CHECK(c2.verdict == Verdict::NotLocallyFree);
  CHECK(c2.min_defect < 1e-12);
  CHECK_FALSE(weights_locally_free_exact(su_bad));
  const double off_pair = c2.witness.ambient.quat(0).norm2();
  CHECK(off_pair < 1e-5);  // mass on the repeated-weight components 2,3

  // SO with repeated |b| on l = 5: not locally free
  SearchSpec so;
  so.kind = ActionCase::SO;
  so.l = 5;
  so.weights.resize(2);
  so.weights << 1, 1;
  const Certificate c3 = locally_free_search(so, 16, 5);
  CHECK(c3.verdict == Verdict::NotLocallyFree);
  CHECK_FALSE(weights_locally_free_exact(so));

  // SO with distinct |b|
  SearchSpec so_ok = so;
  so_ok.weights << 1, 2;
  const Certificate c4 = locally_free_search(so_ok, 16, 5);
  CHECK(c4.verdict == Verdict::LocallyFree);
  CHECK(weights_locally_free_exact(so_ok));

  // weighted sphere with a zero weight collapses; nonzero weights are free
  SearchSpec sw;
  sw.kind = ActionCase::SphereWeighted;
  sw.weights.resize(2);
  sw.weights << 1, 3;
  const Certificate c5 = locally_free_search(sw, 8, 5);
  CHECK(c5.verdict == Verdict::LocallyFree);
  CHECK(c5.min_defect > 0.9);  // min a^2 = 1 on the unit sphere
  sw.weights << 1, 0;
  const Certificate c6 = locally_free_search(sw, 8, 5);
  CHECK(c6.verdict == Verdict::NotLocallyFree);

  // quotient label metadata
  SearchSpec sw2;
  sw2.kind = ActionCase::SphereWeighted;
  sw2.weights.resize(2);
  sw2.weights << 1, 4;
  CHECK(locally_free_search(sw2, 2, 5).note == "M0 = C^2/Z_5");

  // determinism
  const Certificate d1 = locally_free_search(su, 8, 42);
  const Certificate d2 = locally_free_search(su, 8, 42);
  CHECK(d1.min_defect == d2.min_defect);
}

TEST_CASE("G2 defect at the explicit witness and the distinct direction") {
  // distinct b: positive defect at random NHnu points
  SearchSpec g2;
  g2.kind = ActionCase::G2;
  g2.weights.resize(3);
  g2.weights << 1, 2, 3;
  CHECK(weights_locally_free_exact(g2));
  const CounterRng rng(431);
  double minpos = 1e300;
  for (uint64_t t = 0; t < 50; ++t) {
    const ConstraintPoint p =
        project_to_manifold(rng.cone_point(t, 7, 0.5, 2.0), ManifoldTag::NHnu);
    minpos = std::min(minpos, defect_sp1(g2.weights, p, true).defect);
  }
  CHECK(minpos > 1e-4);

  // at the special frame the lambda-average direction still has a positive
  // defect (the delicate case of the criterion)
  const ConePoint u = from_quats({kHalf, kHalfI, kHalfK, kHalfJ, kZero, kZero, kZero});
  ConstraintPoint cu;
  cu.ambient = u;
  cu.tag = ManifoldTag::NHnu;
  Eigen::VectorXi b(3);
  b << 1, 3, 5;  // lambda = 2 averages the first pair
  const Sp1DefectResult r = defect_sp1(b, cu, true);
  CHECK(r.defect > 1e-6);
}

TEST_CASE("Gamma compatibility checks") {
  const int n = 2;
  const auto spec = CircleActionSpec::standard(n);

  // Z_{2n} generated by left multiplication with e^{i pi/n}
  const double th = M_PI / n;
  const Quaternion zeta(std::cos(th), std::sin(th), 0, 0);
  std::vector<Eigen::MatrixXd> gens = {left_mult_blockdiag(zeta, n)};
  const GammaReport r1 = gamma_compat_check(gens, spec, 200, 7);
  CHECK(r1.all_pass);
  CHECK(r1.rows[0].sign == 1);

  // trivial group passes
  CHECK(gamma_compat_check({Eigen::MatrixXd::Identity(4 * n, 4 * n)}, spec, 50, 7).all_pass);

  // binary dihedral pieces (n = 1): right multiplications e^{i pi/l} and j
  const auto spec1 = CircleActionSpec::standard(1);
  const Quaternion rphase(std::cos(M_PI / 3), std::sin(M_PI / 3), 0, 0);
  const GammaReport r2 = gamma_compat_check(
      {right_mult_blockdiag(rphase, 1), right_mult_blockdiag(Quaternion::j(), 1)}, spec1, 200, 7);
  CHECK(r2.all_pass);
  CHECK(r2.rows[0].sign == 1);
  CHECK(r2.rows[1].sign == -1);  // u j i = -u i j

  // a z/w-mixing rotation breaks the x2^2 + x3^2 invariance
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4 * n, 4 * n);
  const double c = std::cos(0.3), s = std::sin(0.3);
  // rotate (z_1, w_1) as real 2-planes: mixes z and w blocks
  for (int k = 0; k < 2; ++k) {
    bad(k, k) = c;
    bad(k, k + 2) = s;
    bad(k + 2, k) = -s;
    bad(k + 2, k + 2) = c;
  }
  const GammaReport r3 = gamma_compat_check({bad}, spec, 200, 7);
  CHECK_FALSE(r3.all_pass);
  CHECK(r3.rows[0].x23_residual > 1e-3);
}
