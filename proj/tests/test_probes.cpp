#include <doctest.h>

#include "oracles.hpp"
#include "tnut/deformation.hpp"
#include "tnut/probes.hpp"
#include "tnut/rng.hpp"

using namespace tnut;

namespace {
const FlowConfig kCfg{};
}

TEST_CASE("curvature pipeline validation: flat and round sphere") {
  // flat
  const MetricField flat = [](const Eigen::VectorXd& p) {
    return Eigen::MatrixXd::Identity(p.size(), p.size());
  };
  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(4);
  p0 << 0.3, -0.1, 0.2, 0.5;
  Eigen::VectorXd X = Eigen::VectorXd::Zero(4), Y = Eigen::VectorXd::Zero(4);
  X[0] = 1;
  Y[1] = 1;
  CHECK(std::abs(sectional_curvature(flat, p0, X, Y, 1e-3)) < 1e-6);

  // round S^4 in a stereographic chart: K = +1
  const MetricField sph = sphere_chart_field(4);
  bool warn = false;
  const double K = sectional_curvature(sph, p0, X, Y, 1e-3, &warn);
  CHECK(K == doctest::Approx(1.0).epsilon(1e-4));
  CHECK_FALSE(warn);

  // Ricci of the sphere: (d-1) g = 3 g
  const Eigen::MatrixXd ric = ricci_tensor(sph, p0, 1e-2);
  const Eigen::MatrixXd g0 = sph(p0);
  CHECK((ric - 3.0 * g0).cwiseAbs().maxCoeff() < 1e-4 * g0(0, 0) * 3.0);
}

TEST_CASE("metric field g_a matches the structure matrices and the det identity") {
  const auto spec = CircleActionSpec::of({1, 2});
  const CounterRng rng(307);
  const MetricField f = metric_field_ga(spec, 1.3);
  for (uint64_t t = 0; t < 30; ++t) {
    const ConePoint m = rng.cone_point(t, 2);
    const Eigen::MatrixXd g1 = f(m.coords);
    const Eigen::MatrixXd g2 = deformed_structure(spec, 1.3, m).g;
    CHECK((g1 - g2).cwiseAbs().maxCoeff() < 1e-12);
    // sqrt(det g_a) = 1 + a^2 |T|^2
    const double det = g1.determinant();
    const double w = 1.0 + 1.3 * 1.3 * circle_generator(spec, m).squaredNorm();
    CHECK(det == doctest::Approx(w * w).epsilon(1e-10));
  }
}

TEST_CASE("deformed metric is Ricci-flat (hyperkahler sanity probe)") {
  const auto spec = CircleActionSpec::standard(1);
  const MetricField f = metric_field_ga(spec, 1.0);
  Eigen::VectorXd p(4);
  p << 0.9, 0.2, -0.4, 0.6;
  const Eigen::MatrixXd ric = ricci_tensor(f, p, 3e-3);
  CHECK(ric.cwiseAbs().maxCoeff() < 2e-5);
}

TEST_CASE("distance upper bound") {
  const auto spec = CircleActionSpec::standard(1);
  const CounterRng rng(311);
  // a = 0: the straight segment is the cone geodesic, exactly rho
  for (uint64_t t = 0; t < 20; ++t) {
    const ConePoint m = rng.cone_point(t, 1);
    CHECK(distance_upper(m, spec, 0.0, kCfg) == doctest::Approx(m.rho()).epsilon(1e-12));
  }
  // rho_hat <= C rho^2 with the fitted constant stable under doubling
  double prev_c = 0.0;
  bool first = true;
  const ConePoint base = rng.cone_point(7, 1, 1.0, 1.0);
  for (double lam : {1.0, 2.0, 4.0, 8.0}) {
    const ConePoint m = base.scaled(lam);
    const double rh = distance_upper(m, spec, 1.0, kCfg);
    const double c = rh / m.rho2();
    if (!first) CHECK(c < prev_c * 1.3 + 1e-9);
    prev_c = c;
    first = false;
  }
  // (K_1^a)^(1/2) comparable to rho_hat along the ray
  for (double lam : {1.0, 4.0, 16.0}) {
    const ConePoint m = base.scaled(lam);
    const double rh = distance_upper(m, spec, 1.0, kCfg);
    const double ratio = std::sqrt(potential_K1a(spec, 1.0, m)) / rh;
    CHECK(ratio > 0.05);
    CHECK(ratio < 20.0);
  }
}

TEST_CASE("volume growth slopes") {
  // Euclidean control (a = 0): slope 4n
  const auto std1 = CircleActionSpec::standard(1);
  const auto r0 = volume_growth(std1, 0.0, {2, 4, 8, 16}, 200000, 7);
  CHECK(r0.slope == doctest::Approx(4.0).epsilon(0.025));

  // n = 1 Taub-NUT: slope 3
  const auto r1 = volume_growth(std1, 1.0, {10, 20, 40, 80}, 400000, 7);
  CHECK(r1.slope == doctest::Approx(3.0).epsilon(0.05));

  // determinism under the seed
  const auto r1b = volume_growth(std1, 1.0, {10, 20, 40, 80}, 400000, 7);
  for (size_t i = 0; i < r1.estimates.size(); ++i) {
    CHECK(r1.estimates[i].volume == r1b.estimates[i].volume);
    CHECK(std::isfinite(r1.estimates[i].stderr_));
  }
  // monotone in R
  for (size_t i = 1; i < r1.estimates.size(); ++i)
    CHECK(r1.estimates[i].volume > r1.estimates[i - 1].volume);
}

TEST_CASE("asymptotic cone probe: gap shrinks with lambda and is one-sided") {
  const auto spec = CircleActionSpec::standard(1);
  const Eigen::Vector3d x1(1.0, 0, 0), x2(0.2, 0.7, -0.4);
  const auto rows = gh_probe(nullptr, x1, x2, {1.0, 0.1, 0.01}, spec, 1.0, kCfg);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.gap > 0.0);
  CHECK(rows[1].gap < rows[0].gap);
  CHECK(rows[2].gap < rows[1].gap);
  CHECK(rows[2].gap / rows[2].model < 0.05);
}

TEST_CASE("horizontal moment curve moves the moment exactly") {
  const auto spec = CircleActionSpec::standard(2);
  const ConePoint m0 = zero_level_point(spec, 313, 0, 1.5);
  const Eigen::Vector3d x1(0.4, 0.1, 0.0), x2(-0.2, 0.5, 0.3);
  const ConePoint p = psi_x(m0, x1, spec, kCfg);
  const auto [len, end] = horizontal_moment_curve(p, x1, x2, spec, 1.0, kCfg);
  CHECK(len > 0.0);
  CHECK((moment_map(spec, end) - x2).norm() < 1e-9);
}

TEST_CASE("conditioning warning fires for badly scaled metrics") {
  const MetricField bad = [](const Eigen::VectorXd& p) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(p.size(), p.size());
    g(0, 0) = 1e10;
    return g;
  };
  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(4);
  Eigen::VectorXd X = Eigen::VectorXd::Zero(4), Y = Eigen::VectorXd::Zero(4);
  X[0] = 1;
  Y[1] = 1;
  bool warn = false;
  sectional_curvature(bad, p0, X, Y, 1e-3, &warn);
  CHECK(warn);
}

TEST_CASE("volume growth guards against starved sampling") {
  const auto spec = CircleActionSpec::standard(2);
  CHECK_THROWS_AS(volume_growth(spec, 1.0, {40, 80}, 2000, 7), std::runtime_error);
  CHECK_THROWS_AS(volume_growth(spec, 1.0, {40.0}, 2000, 7), std::invalid_argument);
}
