#include "tnut/probes.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <future>
#include <thread>

#include "tnut/deformation.hpp"
#include "tnut/fd.hpp"
#include "tnut/rng.hpp"

namespace tnut {

MetricField metric_field_ga(const CircleActionSpec& spec, double a) {
  return [spec, a](const Eigen::VectorXd& c) -> Eigen::MatrixXd {
    const ConePoint m{Eigen::VectorXd(c)};
    const int d = m.dim();
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(d, d);
    if (a == 0.0) return g;
    const Eigen::VectorXd T = circle_generator(spec, m);
    const double t2 = T.squaredNorm();
    const double V = 1.0 / t2;
    for (int i = 1; i <= 3; ++i) {
      const Eigen::VectorXd dx = -structure_times_generator(spec, i, m);
      g += (a * a) * dx * dx.transpose();
    }
    const Eigen::VectorXd eta = V * T;
    g += (1.0 / (V + a * a) - t2) * eta * eta.transpose();
    return g;
  };
}

MetricField sphere_chart_field(int dim) {
  return [dim](const Eigen::VectorXd& s) -> Eigen::MatrixXd {
    const double f = 2.0 / (1.0 + s.squaredNorm());
    return (f * f) * Eigen::MatrixXd::Identity(dim, dim);
  };
}

namespace {

// Christoffel symbols Gamma[k](i,j) = Gamma^k_{ij} at p, central differences.
std::vector<Eigen::MatrixXd> christoffel(const MetricField& g, const Eigen::VectorXd& p, double h,
                                         double* cond_ratio = nullptr) {
  const int d = static_cast<int>(p.size());
  const Eigen::MatrixXd g0 = g(p);
  if (cond_ratio) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g0);
    *cond_ratio = es.eigenvalues().maxCoeff() / std::max(1e-300, es.eigenvalues().minCoeff());
  }
  std::vector<Eigen::MatrixXd> dg(d);
  Eigen::VectorXd xp = p, xm = p;
  for (int k = 0; k < d; ++k) {
    xp[k] += h;
    xm[k] -= h;
    dg[k] = (g(xp) - g(xm)) / (2.0 * h);
    xp[k] = p[k];
    xm[k] = p[k];
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(g0);
  std::vector<Eigen::MatrixXd> gamma(d, Eigen::MatrixXd(d, d));
  Eigen::MatrixXd rhs(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      for (int l = 0; l < d; ++l) rhs(l, 0) = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Eigen::VectorXd sol = llt.solve(rhs.col(0));
      for (int k = 0; k < d; ++k) {
        gamma[k](i, j) = sol[k];
        gamma[k](j, i) = sol[k];
      }
    }
  return gamma;
}

// g(R(X,Y)Y, X) with all derivatives at step h (no extrapolation).
double sectional_raw(const MetricField& g, const Eigen::VectorXd& p, const Eigen::VectorXd& X,
                     const Eigen::VectorXd& Y, double h, double* cond_ratio) {
  const int d = static_cast<int>(p.size());
  const auto gamma0 = christoffel(g, p, h, cond_ratio);

  // directional derivatives of Gamma along X and Y
  const auto gxp = christoffel(g, p + h * X, h);
  const auto gxm = christoffel(g, p - h * X, h);
  const auto gyp = christoffel(g, p + h * Y, h);
  const auto gym = christoffel(g, p - h * Y, h);

  // R(X,Y)Y = (D_X Gamma)(Y,Y) - (D_Y Gamma)(X,Y)
  //           + Gamma(X, Gamma(Y,Y)) - Gamma(Y, Gamma(X,Y))
  Eigen::VectorXd dxG(d), dyG(d), GYY(d), GXY(d);
  for (int k = 0; k < d; ++k) {
    dxG[k] = (Y.dot(gxp[k] * Y) - Y.dot(gxm[k] * Y)) / (2.0 * h);
    dyG[k] = (X.dot(gyp[k] * Y) - X.dot(gym[k] * Y)) / (2.0 * h);
    GYY[k] = Y.dot(gamma0[k] * Y);
    GXY[k] = X.dot(gamma0[k] * Y);
  }
  Eigen::VectorXd R(d);
  for (int k = 0; k < d; ++k) {
    double acc = dxG[k] - dyG[k];
    acc += X.dot(gamma0[k] * GYY) - Y.dot(gamma0[k] * GXY);
    R[k] = acc;
  }
  const Eigen::MatrixXd g0 = g(p);
  const double num = X.dot(g0 * R);
  const double gxx = X.dot(g0 * X), gyy = Y.dot(g0 * Y), gxy = X.dot(g0 * Y);
  return num / (gxx * gyy - gxy * gxy);
}

Eigen::MatrixXd ricci_raw(const MetricField& g, const Eigen::VectorXd& p, double h) {
  const int d = static_cast<int>(p.size());
  const auto gamma0 = christoffel(g, p, h);
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(d);
  Eigen::VectorXd xp = p, xm = p;
  for (int i = 0; i < d; ++i) {
    xp[i] += h;
    xm[i] -= h;
    const auto gp = christoffel(g, xp, h);
    const auto gm = christoffel(g, xm, h);
    dgamma[i].resize(d);
    for (int k = 0; k < d; ++k) dgamma[i][k] = (gp[k] - gm[k]) / (2.0 * h);
    xp[i] = p[i];
    xm[i] = p[i];
  }
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double acc = 0.0;
      for (int i = 0; i < d; ++i) {
        acc += dgamma[i][i](j, k) - dgamma[j][i](i, k);
        for (int m = 0; m < d; ++m)
          acc += gamma0[i](i, m) * gamma0[m](j, k) - gamma0[i](j, m) * gamma0[m](i, k);
      }
      ric(j, k) = acc;
    }
  return ric;
}

}  // namespace

double sectional_curvature(const MetricField& g, const Eigen::VectorXd& p, const Eigen::VectorXd& X,
                           const Eigen::VectorXd& Y, double h, bool* conditioning_warning) {
  double cond = 1.0;
  const double kh = sectional_raw(g, p, X, Y, h, &cond);
  const double kh2 = sectional_raw(g, p, X, Y, 0.5 * h, nullptr);
  if (conditioning_warning) *conditioning_warning = cond > 1e8;
  return richardson2(kh, kh2);
}

Eigen::MatrixXd ricci_tensor(const MetricField& g, const Eigen::VectorXd& p, double h) {
  return richardson2(ricci_raw(g, p, h), ricci_raw(g, p, 0.5 * h));
}

double straight_segment_length(const ConePoint& m, const CircleActionSpec& spec, double a) {
  const double rho = m.rho();
  const double k = 2.0 * a * moment_map(spec, m).norm();
  if (k < 1e-14 * rho) return rho;
  // int_0^1 sqrt(rho^2 + k^2 t^2) dt
  return 0.5 * std::sqrt(rho * rho + k * k) + (rho * rho / (2.0 * k)) * std::asinh(k / rho);
}

double distance_upper(const ConePoint& m, const CircleActionSpec& spec, double a,
                      const FlowConfig& cfg) {
  const double straight = straight_segment_length(m, spec, a);
  const Eigen::Vector3d x = moment_map(spec, m);
  const double r = x.norm();
  if (r < 1e-12 * m.rho2() || a == 0.0) return straight;

  // composite: backward-flow to the level delta |x|, then straight to the vertex
  const Quaternion qx = rotation_to_axis(x);
  const ConePoint p = sp1_act(qx.conj(), m);
  const double target = 0.05 * r;

  // bracket tau < 0 with x1(e^tau p) = target (x1 decreases backward, stays > 0
  // or crosses; either way it passes the target)
  ConePoint cur = p;
  double tau_cur = 0.0;
  auto x1_at = [&](double tau) {
    cur = flow(cur, tau - tau_cur, spec, cfg).endpoint;
    tau_cur = tau;
    return moment_map(spec, cur)[0];
  };
  double lo = -0.5;
  int guard = 0;
  while (x1_at(lo) > target) {
    lo *= 2.0;
    if (-lo > cfg.max_tau || ++guard > 60) return straight;  // give up on the composite
  }
  double hi = 0.0;
  double tau = 0.5 * lo;
  for (int it = 0; it < 80; ++it) {
    const double gv = x1_at(tau) - target;
    if (std::abs(gv) < 1e-12 * std::max(1.0, target)) break;
    if (gv > 0.0)
      hi = tau;
    else
      lo = tau;
    const double gp = circle_generator(spec, cur).squaredNorm();
    double next = tau - gv / gp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - tau) < 1e-13 * std::max(1.0, std::abs(tau))) {
      tau = next;
      break;
    }
    tau = next;
  }
  const double tau_low = tau;
  const ConePoint p_low = cur;

  // flow length from p back to p_low: speed |T| sqrt(1 + a^2 |T|^2),
  // Simpson quadrature over flow segments
  auto speed = [&](const ConePoint& c) {
    const double t2 = circle_generator(spec, c).squaredNorm();
    return std::sqrt(t2 * (1.0 + a * a * t2));
  };
  const int nq = 128;
  const double dt = tau_low / nq;  // negative
  ConePoint q = p;
  double flow_len = 0.0;
  double s_prev = speed(q);
  for (int i = 0; i < nq; ++i) {
    const ConePoint qmid = flow(q, 0.5 * dt, spec, cfg).endpoint;
    const ConePoint qnext = flow(qmid, 0.5 * dt, spec, cfg).endpoint;
    flow_len += std::abs(dt) * (s_prev + 4.0 * speed(qmid) + speed(qnext)) / 6.0;
    q = qnext;
    s_prev = speed(qnext);
  }
  const double composite = straight_segment_length(p_low, spec, a) + flow_len;
  return std::min(straight, composite);
}

namespace {

struct ChunkSum {
  double sum = 0.0;
  double sum_sq = 0.0;
  long long hits = 0;
};

double ball_volume(int dim, double r) {
  // pi^{dim/2} r^dim / Gamma(dim/2 + 1), dim = 4n is even
  const int half = dim / 2;
  double v = std::pow(M_PI, half) * std::pow(r, dim);
  for (int k = 2; k <= half; ++k) v /= k;
  return v;
}

}  // namespace

VolumeGrowthResult volume_growth(const CircleActionSpec& spec, double a,
                                 const std::vector<double>& radii, long long samples,
                                 uint64_t seed) {
  if (radii.size() < 2) throw std::invalid_argument("volume_growth: need at least 2 radii");
  const int dim = spec.dim();
  VolumeGrowthResult out;

  const long long chunk = 1 << 16;
  const unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());

  for (size_t ri = 0; ri < radii.size(); ++ri) {
    const double R = radii[ri];
    const double rb = std::sqrt(2.0) * R;
    const CounterRng rng(seed, 0x70a1 + ri);
    const long long nchunks = (samples + chunk - 1) / chunk;

    auto run_chunk = [&](long long c0) {
      ChunkSum cs;
      const long long begin = c0 * chunk;
      const long long end = std::min(samples, begin + chunk);
      ConePoint m(Eigen::VectorXd::Zero(dim));
      for (long long idx = begin; idx < end; ++idx) {
        m.coords = rb * rng.ball_vector(static_cast<uint64_t>(idx), dim);
        const double K = potential_K1a(spec, a, m);
        if (K <= R * R) {
          const double w = 1.0 + a * a * circle_generator(spec, m).squaredNorm();
          cs.sum += w;
          cs.sum_sq += w * w;
          ++cs.hits;
        }
      }
      return cs;
    };

    std::vector<ChunkSum> partial(nchunks);
    {
      std::vector<std::future<void>> fut;
      std::atomic<long long> next{0};
      for (unsigned t = 0; t < nthreads; ++t)
        fut.push_back(std::async(std::launch::async, [&] {
          long long c;
          while ((c = next.fetch_add(1)) < nchunks) partial[c] = run_chunk(c);
        }));
      for (auto& f : fut) f.get();
    }
    ChunkSum total;
    for (const auto& cs : partial) {  // fixed combination order: seed-stable
      total.sum += cs.sum;
      total.sum_sq += cs.sum_sq;
      total.hits += cs.hits;
    }
    const double vol_box = ball_volume(dim, rb);
    const double mean = total.sum / samples;
    const double var = std::max(0.0, total.sum_sq / samples - mean * mean);
    VolumeEstimate est;
    est.R = R;
    est.volume = vol_box * mean;
    est.stderr_ = vol_box * std::sqrt(var / samples);
    est.samples = samples;
    est.seed = seed;
    if (total.hits < 100)
      throw std::runtime_error("volume_growth: insufficient effective samples at R = " +
                               std::to_string(R));
    out.estimates.push_back(est);
  }

  // least-squares slope of log V against log R
  const int nr = static_cast<int>(radii.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& e : out.estimates) {
    const double lx = std::log(e.R), ly = std::log(e.volume);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (nr * sxy - sx * sy) / (nr * sxx - sx * sx);
  return out;
}

ConePoint level_anchor(const CircleActionSpec& spec, const Eigen::Vector3d& x,
                       const FlowConfig& cfg, uint64_t seed) {
  const double r = x.norm();
  if (spec.n() == 1) {
    if (r == 0.0) throw std::invalid_argument("level_anchor: x = 0 is the vertex for n = 1");
    if (spec.weights[0] != 1)
      throw std::invalid_argument("level_anchor: n = 1 anchor assumes the standard action");
    ConePoint base(Eigen::VectorXd::Zero(4));
    base.set_zw(0, {std::sqrt(2.0 * r), 0.0}, {0.0, 0.0});  // mu = (r, 0, 0)
    return sp1_act(rotation_to_axis(x), base);
  }
  const ConePoint m0 = zero_level_point(spec, seed, 0);
  if (r == 0.0) return m0;
  return psi_x(m0, x, spec, cfg);
}

std::pair<double, ConePoint> horizontal_moment_curve(const ConePoint& p, const Eigen::Vector3d& x1,
                                                     const Eigen::Vector3d& x2,
                                                     const CircleActionSpec& spec, double a,
                                                     const FlowConfig& cfg) {
  const Eigen::Vector3d c = x2 - x1;
  if (c.norm() == 0.0) return {0.0, p};
  const Eigen::Vector3d mu = moment_map(spec, p);
  if ((mu - x1).norm() > 1e-7 * std::max(1.0, p.rho2()))
    throw std::invalid_argument("horizontal_moment_curve: start not on mu^{-1}(x1)");
  (void)cfg;

  // m'(s) = -V sum_j c_j I_j T(m); the moment moves exactly along x1 + s c and
  // the g_a speed is |c| sqrt(V + a^2).  Integrate with classical RK4 plus
  // Simpson quadrature for the length; the path stays clear of |T| = 0 for
  // locally free weights.
  const int nsteps = 512;
  const double ds = 1.0 / nsteps;
  auto vel = [&](const ConePoint& m) -> Eigen::VectorXd {
    const double V = 1.0 / circle_generator(spec, m).squaredNorm();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m.dim());
    for (int j = 0; j < 3; ++j) v -= V * c[j] * structure_times_generator(spec, j + 1, m);
    return v;
  };
  auto speed = [&](const ConePoint& m) {
    const double V = 1.0 / circle_generator(spec, m).squaredNorm();
    return c.norm() * std::sqrt(V + a * a);
  };
  ConePoint m = p;
  double L = 0.0;
  for (int i = 0; i < nsteps; ++i) {
    const double s0 = speed(m);
    const Eigen::VectorXd k1 = vel(m);
    const ConePoint m2{m.coords + 0.5 * ds * k1};
    const Eigen::VectorXd k2 = vel(m2);
    const ConePoint m3{m.coords + 0.5 * ds * k2};
    const Eigen::VectorXd k3 = vel(m3);
    const ConePoint m4{m.coords + ds * k3};
    const Eigen::VectorXd k4 = vel(m4);
    ConePoint next{m.coords + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)};
    const double smid = speed(ConePoint{m.coords + 0.5 * ds * k2});
    const double s1 = speed(next);
    L += ds * (s0 + 4.0 * smid + s1) / 6.0;
    m = next;
  }
  // polish the endpoint onto mu^{-1}(x2)
  m = project_to_moment_level(m, x2, spec, 1e-12, 40);
  return {L, m};
}

std::vector<GhRow> gh_probe(const ConePoint* m0, const Eigen::Vector3d& x1,
                            const Eigen::Vector3d& x2, const std::vector<double>& lambdas,
                            const CircleActionSpec& spec, double a, const FlowConfig& cfg) {
  std::vector<GhRow> rows;
  for (double lam : lambdas) {
    ConePoint anchor = [&] {
      if (spec.n() >= 2 && m0 != nullptr) {
        const ConePoint scaled = m0->scaled(1.0 / lam);
        if (x1.norm() == 0.0) return scaled;
        return psi_x(scaled, x1 / lam, spec, cfg);
      }
      return level_anchor(spec, x1 / lam, cfg);
    }();
    const auto [len, end] = horizontal_moment_curve(anchor, x1 / lam, x2 / lam, spec, a, cfg);
    (void)end;
    GhRow row;
    row.lambda = lam;
    row.upper = lam * len;
    row.model = a * (x2 - x1).norm();
    row.gap = row.upper - row.model;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tnut
