#include "tnut/quotient_actions.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "tnut/fd.hpp"
#include "tnut/rng.hpp"

namespace tnut {

namespace {

// l x 4 frame matrix with column p holding the p-th real component of each u_a
Eigen::MatrixXd frame_matrix(const ConePoint& p) {
  const int l = p.n();
  Eigen::MatrixXd U(l, 4);
  for (int a = 0; a < l; ++a)
    for (int c = 0; c < 4; ++c) U(a, c) = p.coords[4 * a + c];
  return U;
}

void set_frame(ConePoint& p, const Eigen::MatrixXd& U) {
  for (int a = 0; a < p.n(); ++a)
    for (int c = 0; c < 4; ++c) p.coords[4 * a + c] = U(a, c);
}

Eigen::Vector3d nu_value(const ConePoint& p) {
  // sum over block pairs of Im(u_{2b-1} conj(u_{2b})) doubled
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  const int s = p.n() / 2;
  for (int b = 0; b < s; ++b) {
    const Quaternion d = p.quat(2 * b) * p.quat(2 * b + 1).conj();
    v += 2.0 * d.imag();
  }
  return v;
}

// generator of the block rotation with weights b: T'_{2b-1} = b u_{2b},
// T'_{2b} = -b u_{2b-1} (quaternion components untouched)
Eigen::VectorXd block_generator(const Eigen::VectorXi& b, const ConePoint& p) {
  Eigen::VectorXd T = Eigen::VectorXd::Zero(p.dim());
  for (int beta = 0; beta < b.size(); ++beta) {
    const int i = 2 * beta, j = 2 * beta + 1;
    for (int c = 0; c < 4; ++c) {
      T[4 * i + c] = b[beta] * p.coords[4 * j + c];
      T[4 * j + c] = -b[beta] * p.coords[4 * i + c];
    }
  }
  return T;
}

// T_q(u) = u q for imaginary unit q = e_i: right multiplication blockwise
Eigen::VectorXd right_axis_generator(int axis, const ConePoint& p) {
  Eigen::VectorXd T(p.dim());
  const Quaternion e = (axis == 0) ? Quaternion::i() : (axis == 1) ? Quaternion::j() : Quaternion::k();
  for (int a = 0; a < p.n(); ++a) {
    const Quaternion r = p.quat(a) * e;
    T[4 * a] = r.q0;
    T[4 * a + 1] = r.q1;
    T[4 * a + 2] = r.q2;
    T[4 * a + 3] = r.q3;
  }
  return T;
}

}  // namespace

Eigen::VectorXd constraint_residuals(const ConePoint& p, ManifoldTag tag) {
  switch (tag) {
    case ManifoldTag::Sphere: {
      Eigen::VectorXd r(1);
      r[0] = p.rho2() - 1.0;
      return r;
    }
    case ManifoldTag::NC: {
      double z2 = 0.0, w2 = 0.0;
      std::complex<double> zw(0, 0);
      for (int a = 0; a < p.n(); ++a) {
        z2 += std::norm(p.z(a));
        w2 += std::norm(p.w(a));
        zw += p.z(a) * p.w(a);
      }
      Eigen::VectorXd r(4);
      r << z2 - 0.5, w2 - 0.5, zw.real(), zw.imag();
      return r;
    }
    case ManifoldTag::NH:
    case ManifoldTag::NHnu: {
      const Eigen::MatrixXd U = frame_matrix(p);
      const Eigen::Matrix4d G = U.transpose() * U - 0.25 * Eigen::Matrix4d::Identity();
      const int extra = (tag == ManifoldTag::NHnu) ? 3 : 0;
      Eigen::VectorXd r(10 + extra);
      int k = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) r[k++] = G(i, j);
      if (extra) r.tail<3>() = nu_value(p);
      return r;
    }
  }
  throw std::logic_error("constraint_residuals: bad tag");
}

ConstraintPoint project_to_manifold(const ConePoint& ambient, ManifoldTag tag) {
  ConePoint p = ambient;
  switch (tag) {
    case ManifoldTag::Sphere: {
      const double n = p.rho();
      if (n < 1e-12) throw std::runtime_error("project_to_manifold: near-zero input");
      p = p.scaled(1.0 / n);
      break;
    }
    case ManifoldTag::NH:
    case ManifoldTag::NHnu: {
      // polar retraction of the frame; alternate with Gauss-Newton on nu
      bool done = false;
      for (int outer = 0; outer < 200 && !done; ++outer) {
        Eigen::MatrixXd U = frame_matrix(p);
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(U, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.singularValues().minCoeff() < 1e-10)
          throw std::runtime_error("project_to_manifold: degenerate frame");
        U = 0.5 * svd.matrixU() * svd.matrixV().transpose();
        set_frame(p, U);
        const Eigen::VectorXd r = constraint_residuals(p, tag);
        done = r.norm() < 1e-12;
        if (done || tag == ManifoldTag::NH) break;  // polar alone settles NH
        auto res = [&](const Eigen::VectorXd& c) {
          return constraint_residuals(ConePoint(c), ManifoldTag::NHnu);
        };
        const Eigen::MatrixXd J = fd_jacobian(res, p.coords, 1e-7);
        const Eigen::MatrixXd JJt = J * J.transpose();
        p = ConePoint(p.coords - J.transpose() * JJt.ldlt().solve(r));
      }
      break;
    }
    case ManifoldTag::NC: {
      // scale z and w, then Gauss-Newton on all four constraints
      for (int outer = 0; outer < 200; ++outer) {
        double z2 = 0.0, w2 = 0.0;
        for (int a = 0; a < p.n(); ++a) {
          z2 += std::norm(p.z(a));
          w2 += std::norm(p.w(a));
        }
        if (z2 < 1e-14 || w2 < 1e-14)
          throw std::runtime_error("project_to_manifold: z or w collapsed");
        for (int a = 0; a < p.n(); ++a)
          p.set_zw(a, p.z(a) / std::sqrt(2.0 * z2), p.w(a) / std::sqrt(2.0 * w2));
        const Eigen::VectorXd r = constraint_residuals(p, tag);
        if (r.norm() < 1e-12) break;
        auto res = [&](const Eigen::VectorXd& c) {
          return constraint_residuals(ConePoint(c), ManifoldTag::NC);
        };
        const Eigen::MatrixXd J = fd_jacobian(res, p.coords, 1e-7);
        const Eigen::MatrixXd JJt = J * J.transpose();
        p = ConePoint(p.coords - J.transpose() * JJt.ldlt().solve(r));
        if (outer == 199) throw std::runtime_error("project_to_manifold: no convergence");
      }
      break;
    }
  }
  ConstraintPoint out;
  out.ambient = p;
  out.tag = tag;
  out.residuals = constraint_residuals(p, tag);
  if (out.residuals.cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("project_to_manifold: residuals did not converge");
  return out;
}

double defect_su(const Eigen::VectorXi& weights, const ConstraintPoint& p,
                 double* identity_residual) {
  const ConePoint& u = p.ambient;
  const int m = u.n();
  if (weights.size() != m) throw std::invalid_argument("defect_su: weight/point size mismatch");
  // T' = (a_1 u_1 i, ..., a_m u_m i), T = u i
  double tp2 = 0.0, t2 = 0.0, inner = 0.0;
  for (int a = 0; a < m; ++a) {
    const double ua2 = u.quat(a).norm2();
    tp2 += double(weights[a]) * weights[a] * ua2;
    t2 += ua2;
    inner += weights[a] * ua2;
  }
  const double lhs = tp2 * t2 - inner * inner;
  if (identity_residual) {
    double rhs = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        const double d = weights[a] - weights[b];
        rhs += d * d * u.quat(a).norm2() * u.quat(b).norm2();
      }
    *identity_residual = std::abs(lhs - rhs);
  }
  return lhs;
}

namespace {

double sp1_defect_at(const Eigen::VectorXd& Tp, const ConePoint& p, Eigen::Vector3d* qmin) {
  const double rho2 = p.rho2();
  Eigen::Vector3d c;
  for (int i = 0; i < 3; ++i) c[i] = Tp.dot(right_axis_generator(i, p));
  if (qmin) *qmin = (c.norm() > 0) ? Eigen::Vector3d(c.normalized()) : Eigen::Vector3d(1, 0, 0);
  return Tp.squaredNorm() * rho2 - c.squaredNorm();
}

}  // namespace

Sp1DefectResult defect_sp1(const Eigen::VectorXi& b, const ConstraintPoint& p, bool g2_mode) {
  Sp1DefectResult out;
  const Eigen::VectorXd Tp = block_generator(b, p.ambient);
  if (!g2_mode) {
    Eigen::Vector3d q;
    out.defect = sp1_defect_at(Tp, p.ambient, &q);
    out.q = Quaternion(0, q[0], q[1], q[2]);
    return out;
  }
  // G2: minimize over lambda the defect of T' - lambda T, T the all-ones block
  // generator on the paired components
  Eigen::VectorXi ones = Eigen::VectorXi::Ones(b.size());
  const Eigen::VectorXd T = block_generator(ones, p.ambient);
  auto defect_of = [&](double lam) {
    return sp1_defect_at(Tp - lam * T, p.ambient, nullptr);
  };
  const double lam_max = 2.0 * b.cwiseAbs().maxCoeff() + 3.0;
  // coarse scan then golden-section refinement
  double best_lam = 0.0, best = defect_of(0.0);
  const int nscan = 201;
  for (int i = 0; i < nscan; ++i) {
    const double lam = -lam_max + 2.0 * lam_max * i / (nscan - 1);
    const double d = defect_of(lam);
    if (d < best) {
      best = d;
      best_lam = lam;
    }
  }
  double lo = best_lam - 2.0 * lam_max / (nscan - 1);
  double hi = best_lam + 2.0 * lam_max / (nscan - 1);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = defect_of(x1), f2 = defect_of(x2);
  for (int it = 0; it < 120; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = defect_of(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = defect_of(x2);
    }
  }
  out.lambda = 0.5 * (lo + hi);
  Eigen::Vector3d q;
  out.defect = sp1_defect_at(Tp - out.lambda * T, p.ambient, &q);
  out.q = Quaternion(0, q[0], q[1], q[2]);
  return out;
}

double defect_sp1_grid(const Eigen::VectorXi& b, const ConstraintPoint& p, int grid_deg) {
  const Eigen::VectorXd Tp = block_generator(b, p.ambient);
  const double rho2 = p.ambient.rho2();
  Eigen::Vector3d c;
  for (int i = 0; i < 3; ++i) c[i] = Tp.dot(right_axis_generator(i, p.ambient));
  double best = std::numeric_limits<double>::infinity();
  for (int ith = 0; ith <= 180 / grid_deg; ++ith)
    for (int iph = 0; iph < 360 / grid_deg; ++iph) {
      const double th = M_PI * ith * grid_deg / 180.0;
      const double ph = 2.0 * M_PI * iph * grid_deg / 360.0;
      const Eigen::Vector3d q(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                              std::cos(th));
      best = std::min(best, Tp.squaredNorm() * rho2 - std::pow(c.dot(q), 2));
    }
  return best;
}

namespace {

ManifoldTag tag_of(const SearchSpec& s) {
  switch (s.kind) {
    case ActionCase::SU: return ManifoldTag::NC;
    case ActionCase::SO: return ManifoldTag::NH;
    case ActionCase::G2: return ManifoldTag::NHnu;
    case ActionCase::SphereWeighted: return ManifoldTag::Sphere;
  }
  throw std::logic_error("bad case");
}

int ambient_n(const SearchSpec& s) {
  switch (s.kind) {
    case ActionCase::SU: return static_cast<int>(s.weights.size());
    case ActionCase::SO: return s.l;
    case ActionCase::G2: return 7;
    case ActionCase::SphereWeighted: return static_cast<int>(s.weights.size());
  }
  throw std::logic_error("bad case");
}

double defect_value(const SearchSpec& s, const ConstraintPoint& p) {
  switch (s.kind) {
    case ActionCase::SU: return defect_su(s.weights, p);
    case ActionCase::SO: return defect_sp1(s.weights, p, false).defect;
    case ActionCase::G2: return defect_sp1(s.weights, p, true).defect;
    case ActionCase::SphereWeighted: {
      CircleActionSpec cs;
      cs.weights = s.weights;
      return circle_generator(cs, p.ambient).squaredNorm();
    }
  }
  throw std::logic_error("bad case");
}

// value and exact ambient gradient (envelope over the inner q / lambda
// minimizers for the Sp(1) cases)
double defect_with_gradient(const SearchSpec& s, const ConePoint& p, Eigen::VectorXd& grad) {
  switch (s.kind) {
    case ActionCase::SU: {
      // T' and T are right multiplications by i with weights a and 1
      const int m = p.n();
      Eigen::VectorXd Tp(p.dim()), T(p.dim());
      for (int a = 0; a < m; ++a) {
        const Quaternion r = p.quat(a) * Quaternion::i();
        for (int c = 0; c < 4; ++c) {
          T[4 * a + c] = r.vec()[c];
          Tp[4 * a + c] = s.weights[a] * r.vec()[c];
        }
      }
      const double tp2 = Tp.squaredNorm(), t2 = T.squaredNorm(), in = Tp.dot(T);
      // |T'|^2 = sum a^2 |u|^2 etc.: gradients are diagonal in the components
      Eigen::VectorXd g(p.dim());
      for (int a = 0; a < m; ++a) {
        const double wa = s.weights[a];
        for (int c = 0; c < 4; ++c) {
          const double u = p.coords[4 * a + c];
          g[4 * a + c] =
              2.0 * wa * wa * u * t2 + tp2 * 2.0 * u - 2.0 * in * 2.0 * wa * u;
        }
      }
      grad = g;
      return tp2 * t2 - in * in;
    }
    case ActionCase::SO:
    case ActionCase::G2: {
      const bool g2 = s.kind == ActionCase::G2;
      ConstraintPoint cp;
      cp.ambient = p;
      cp.tag = g2 ? ManifoldTag::NHnu : ManifoldTag::NH;
      const Sp1DefectResult r = defect_sp1(s.weights, cp, g2);

      // effective generator matrix B with T' - lambda T = B p; q*, lambda*
      // frozen (envelope theorem)
      const int d = p.dim();
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
      for (int beta = 0; beta < s.weights.size(); ++beta) {
        const int i = 2 * beta, j = 2 * beta + 1;
        const double b = g2 ? (s.weights[beta] - r.lambda) : double(s.weights[beta]);
        for (int c = 0; c < 4; ++c) {
          B(4 * i + c, 4 * j + c) = b;
          B(4 * j + c, 4 * i + c) = -b;
        }
      }
      const Eigen::VectorXd Tp = B * p.coords;
      const Eigen::MatrixXd Rq = right_mult_blockdiag(
          Quaternion(0, r.q.q1, r.q.q2, r.q.q3).normalized(), p.n());
      const Eigen::VectorXd Tq = Rq * p.coords;
      const double rho2 = p.rho2();
      const double tp2 = Tp.squaredNorm();
      const double cq = Tp.dot(Tq);
      const Eigen::VectorXd grad_cq = B.transpose() * Tq + Rq.transpose() * Tp;
      grad = 2.0 * (B.transpose() * Tp) * rho2 + tp2 * 2.0 * p.coords - 2.0 * cq * grad_cq;
      return tp2 * rho2 - cq * cq;
    }
    case ActionCase::SphereWeighted: {
      CircleActionSpec cs;
      cs.weights = s.weights;
      const Eigen::VectorXd T = circle_generator(cs, p);
      grad.resize(p.dim());
      for (int a = 0; a < p.n(); ++a) {
        const double w2 = double(s.weights[a]) * s.weights[a];
        for (int c = 0; c < 4; ++c) grad[4 * a + c] = 2.0 * w2 * p.coords[4 * a + c];
      }
      return T.squaredNorm();
    }
  }
  throw std::logic_error("bad case");
}

}  // namespace

bool weights_locally_free_exact(const SearchSpec& s) {
  const auto& w = s.weights;
  switch (s.kind) {
    case ActionCase::SU: {
      for (int i = 0; i < w.size(); ++i)
        for (int j = i + 1; j < w.size(); ++j)
          if (w[i] == w[j]) return false;
      return true;
    }
    case ActionCase::SO: {
      for (int i = 0; i < w.size(); ++i)
        for (int j = i + 1; j < w.size(); ++j)
          if (std::abs(w[i]) == std::abs(w[j])) return false;
      return true;
    }
    case ActionCase::G2: {
      // sufficient direction only
      for (int i = 0; i < w.size(); ++i)
        for (int j = i + 1; j < w.size(); ++j)
          if (w[i] == w[j]) return false;
      return true;
    }
    case ActionCase::SphereWeighted:
      return (w.array() != 0).all();
  }
  throw std::logic_error("bad case");
}

Certificate locally_free_search(const SearchSpec& sspec, int starts, uint64_t seed) {
  const ManifoldTag tag = tag_of(sspec);
  const int n = ambient_n(sspec);
  const CounterRng rng(seed, 0x10c4);

  Certificate cert;
  cert.starts = starts;
  cert.min_defect = std::numeric_limits<double>::infinity();

  for (int s = 0; s < starts; ++s) {
    ConePoint p0(rng.gaussian_vector(static_cast<uint64_t>(s), 4 * n));
    ConstraintPoint cp;
    try {
      cp = project_to_manifold(p0, tag);
    } catch (const std::runtime_error&) {
      continue;
    }

    auto tangent_project = [&](const Eigen::VectorXd& at, Eigen::VectorXd g) {
      auto res = [&](const Eigen::VectorXd& c) { return constraint_residuals(ConePoint(c), tag); };
      const Eigen::MatrixXd J = fd_jacobian(res, at, 1e-7);
      const Eigen::MatrixXd JJt = J * J.transpose();
      g -= J.transpose() * JJt.ldlt().solve(J * g);
      return g;
    };

    Eigen::VectorXd grad;
    double f = defect_with_gradient(sspec, cp.ambient, grad);
    grad = tangent_project(cp.ambient.coords, grad);
    double step = 0.05;
    Eigen::VectorXd prev_x, prev_g;
    for (int it = 0; it < 2000 && f > 1e-14; ++it) {
      const double gn = grad.norm();
      if (gn < 1e-13) break;

      // Barzilai-Borwein step with a monotone backtracking safeguard
      if (prev_x.size()) {
        const Eigen::VectorXd dx = cp.ambient.coords - prev_x;
        const Eigen::VectorXd dg = grad - prev_g;
        const double denom = dx.dot(dg);
        if (denom > 1e-300) step = std::clamp(dx.squaredNorm() / denom, 1e-6, 10.0);
      }
      bool accepted = false;
      double st = step;
      for (int bt = 0; bt < 40; ++bt) {
        try {
          const ConstraintPoint trial =
              project_to_manifold(ConePoint(cp.ambient.coords - st * grad), tag);
          Eigen::VectorXd gtrial;
          const double ft = defect_with_gradient(sspec, trial.ambient, gtrial);
          if (ft < f - 1e-6 * st * gn * gn) {
            prev_x = cp.ambient.coords;
            prev_g = grad;
            cp = trial;
            f = ft;
            grad = tangent_project(cp.ambient.coords, gtrial);
            accepted = true;
            break;
          }
        } catch (const std::runtime_error&) {
          // retraction failed; shrink
        }
        st *= 0.5;
      }
      if (!accepted) break;
    }

    if (f < cert.min_defect) {
      cert.min_defect = f;
      cert.witness = cp;
      cert.witness.residuals = constraint_residuals(cp.ambient, tag);
    }
  }

  if (cert.min_defect < 1e-10)
    cert.verdict = Verdict::NotLocallyFree;
  else if (cert.min_defect > 1e-6)
    cert.verdict = Verdict::LocallyFree;
  else
    cert.verdict = Verdict::Inconclusive;

  if (sspec.kind == ActionCase::SphereWeighted && sspec.weights.size() == 2 &&
      sspec.weights[0] == 1)
    cert.note = "M0 = C^2/Z_" + std::to_string(sspec.weights[1] + 1);
  return cert;
}

GammaReport gamma_compat_check(const std::vector<Eigen::MatrixXd>& generators,
                               const CircleActionSpec& spec, int samples, uint64_t seed) {
  const CounterRng rng(seed, 0x6a3);
  GammaReport rep;
  rep.all_pass = true;
  for (const auto& G : generators) {
    GammaRow row;
    double rp = 0.0, rm = 0.0, rx = 0.0;
    for (int s = 0; s < samples; ++s) {
      const ConePoint m = rng.cone_point(static_cast<uint64_t>(s), spec.n());
      const ConePoint gm{Eigen::VectorXd(G * m.coords)};
      const Eigen::VectorXd lhs = G * circle_generator(spec, m);
      const Eigen::VectorXd rhs = circle_generator(spec, gm);
      const double sc = std::max(1e-300, rhs.norm());
      rp = std::max(rp, (lhs - rhs).norm() / sc);
      rm = std::max(rm, (lhs + rhs).norm() / sc);
      const Eigen::Vector3d x = moment_map(spec, m);
      const Eigen::Vector3d xg = moment_map(spec, gm);
      const double q23 = x[1] * x[1] + x[2] * x[2];
      const double q23g = xg[1] * xg[1] + xg[2] * xg[2];
      rx = std::max(rx, std::abs(q23 - q23g) / std::max(1.0, m.rho2() * m.rho2()));
    }
    row.sign = (rp <= rm) ? 1 : -1;
    row.t_residual = std::min(rp, rm);
    row.x23_residual = rx;
    row.pass = row.t_residual < 1e-10 && row.x23_residual < 1e-10;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

Eigen::MatrixXd left_mult_blockdiag(const Quaternion& q, int n) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  const Eigen::Matrix4d L = left_mult_matrix(q);
  for (int a = 0; a < n; ++a) M.block<4, 4>(4 * a, 4 * a) = L;
  return M;
}

Eigen::MatrixXd right_mult_blockdiag(const Quaternion& q, int n) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  const Eigen::Matrix4d R = right_mult_matrix(q);
  for (int a = 0; a < n; ++a) M.block<4, 4>(4 * a, 4 * a) = R;
  return M;
}

}  // namespace tnut
