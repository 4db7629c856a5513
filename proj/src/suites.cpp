#include "tnut/suites.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "tnut/deformation.hpp"
#include "tnut/fd.hpp"
#include "tnut/gluing.hpp"
#include "tnut/probes.hpp"
#include "tnut/quotient_actions.hpp"
#include "tnut/rng.hpp"
#include "tnut/twist.hpp"

namespace tnut {

namespace {

CircleActionSpec spec_of(const ExperimentConfig& cfg) {
  CircleActionSpec s;
  if (cfg.weights.empty()) {
    s.weights = Eigen::VectorXi::Ones(cfg.n);
  } else {
    s.weights.resize(static_cast<Eigen::Index>(cfg.weights.size()));
    for (size_t i = 0; i < cfg.weights.size(); ++i) s.weights[i] = cfg.weights[i];
  }
  return s;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
};

Eigen::VectorXi parse_int_list(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) v.push_back(std::stoi(tok));
  }
  Eigen::VectorXi out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 1 || n > 8) throw std::invalid_argument("config: n out of range [1,8]");
  if (!weights.empty() && static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("config: weights length must equal n");
  if (a < 0.0) throw std::invalid_argument("config: a must be >= 0");
  if (c <= 0.0) throw std::invalid_argument("config: c must be > 0");
  if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("config: alpha in (0,1]");
  if (samples < 1) throw std::invalid_argument("config: samples must be positive");
  if (radii.size() < 2) throw std::invalid_argument("config: need at least 2 radii");
  for (size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw std::invalid_argument("config: radii must increase");
  if (tol_scale <= 0.0) throw std::invalid_argument("config: tol_scale must be positive");
}

std::string ExperimentConfig::print() const {
  std::ostringstream os;
  os << "suite=" << suite << "\nn=" << n << "\nweights=";
  if (weights.empty()) {
    os << "(standard all-ones)";
  } else {
    for (size_t i = 0; i < weights.size(); ++i) os << (i ? "," : "") << weights[i];
  }
  os << "\na=" << a << "\nc=" << c << "\nalpha=" << alpha << "\nsamples=" << samples << "\nradii=";
  for (size_t i = 0; i < radii.size(); ++i) os << (i ? "," : "") << radii[i];
  os << "\nseed=" << seed << "\ntol_scale=" << tol_scale << "\nout=" << out
     << "\nlf_case=" << lf_case << "\nlf_weights=" << lf_weights << "\n";
  return os.str();
}

void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "suite") cfg.suite = value;
  else if (key == "n") cfg.n = std::stoi(value);
  else if (key == "weights") {
    cfg.weights.clear();
    const Eigen::VectorXi w = parse_int_list(value);
    for (Eigen::Index i = 0; i < w.size(); ++i) cfg.weights.push_back(w[i]);
  } else if (key == "a") cfg.a = std::stod(value);
  else if (key == "c") cfg.c = std::stod(value);
  else if (key == "alpha") cfg.alpha = std::stod(value);
  else if (key == "samples") cfg.samples = std::stoll(value);
  else if (key == "radii") {
    cfg.radii.clear();
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.radii.push_back(std::stod(tok));
  } else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "tol_scale") cfg.tol_scale = std::stod(value);
  else if (key == "out") cfg.out = value;
  else if (key == "lf_case") cfg.lf_case = value;
  else if (key == "lf_weights") cfg.lf_weights = value;
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: bad line " + std::to_string(lineno));
    apply_key_value(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

SuiteResult suite_verify_structure(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "verify-structure";
  const CircleActionSpec spec = spec_of(cfg);
  const CounterRng rng(cfg.seed);
  const long long N = cfg.samples;
  Timer tm;
  const int n = spec.n();

  double w_quat = 0, w_comp = 0, w_eta = 0, w_equiv = 0, w_closed = 0, w_cs = 0, w_pair = 0;
  for (long long t = 0; t < N; ++t) {
    const ConePoint m = rng.cone_point(static_cast<uint64_t>(t), n);
    const StructureAtPoint s = deformed_structure(spec, cfg.a, m);
    const auto id = Eigen::MatrixXd::Identity(4 * n, 4 * n);
    w_quat = std::max({w_quat, (s.I[0] * s.I[1] - s.I[2]).cwiseAbs().maxCoeff(),
                       (s.I[0] * s.I[0] + id).cwiseAbs().maxCoeff()});
    w_comp = std::max(w_comp, (s.omega[0] - s.I[0].transpose() * s.g).cwiseAbs().maxCoeff());
    const ConnectionData c = connection_data(spec, m);
    w_eta = std::max(w_eta, std::abs(c.eta.dot(c.T) - 1.0));
    const Quaternion q = rng.unit_quaternion(static_cast<uint64_t>(t), 48);
    const Eigen::Vector3d mu = moment_map(spec, m);
    w_equiv = std::max(
        w_equiv, (moment_map(spec, sp1_act(q, m)) - covering_phi(q) * mu).cwiseAbs().maxCoeff());
    w_closed =
        std::max(w_closed, (mu - moment_map_closed_form(spec, m)).cwiseAbs().maxCoeff());
    const double bound = m.rho2() * c.T.squaredNorm();
    const ReebFrame fr = reeb_frame(m);
    for (int i = 0; i < 3; ++i) {
      w_cs = std::max(w_cs, 4.0 * mu[i] * mu[i] - bound);
      w_pair = std::max(w_pair, std::abs(c.T.dot(fr.xi[i]) - 2.0 * mu[i]));
    }
  }
  const double tol = 1e-9 * cfg.tol_scale;
  res.add("quaternionic_core.complex_structure/relations", "max_residual", w_quat, tol,
          w_quat < tol, cfg.seed, tm.ms());
  res.add("taub_nut_deformation.deformed_structure/compatibility", "max_residual", w_comp, tol,
          w_comp < tol, cfg.seed, tm.ms());
  res.add("cone_structure.connection_data/eta_T", "max_residual", w_eta, 1e-10 * cfg.tol_scale,
          w_eta < 1e-10 * cfg.tol_scale, cfg.seed, tm.ms());
  res.add("cone_structure.moment_map/sp1_equivariance", "max_residual", w_equiv, tol, w_equiv < tol,
          cfg.seed, tm.ms());
  res.add("cone_structure.moment_map/closed_form", "max_residual", w_closed, 1e-12 * cfg.tol_scale,
          w_closed < 1e-12 * cfg.tol_scale, cfg.seed, tm.ms());
  res.add("cone_structure.moment_map/cauchy_schwarz_slack", "max_violation", w_cs,
          1e-12 * cfg.tol_scale, w_cs < 1e-12 * cfg.tol_scale, cfg.seed, tm.ms());
  res.add("cone_structure.reeb_frame/T_pairing", "max_residual", w_pair, 1e-11 * cfg.tol_scale,
          w_pair < 1e-11 * cfg.tol_scale, cfg.seed, tm.ms());
  return res;
}

SuiteResult suite_flow_oracle(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "flow-oracle";
  Timer tm;
  const FlowConfig fcfg{};
  const auto spec = CircleActionSpec::standard(std::max(2, cfg.n));
  double w_rho = 0, w_x1 = 0, w_tau = 0, w_f = 0, w_round = 0;
  const int cases = static_cast<int>(std::min<long long>(cfg.samples, 50));
  for (int t = 0; t < cases; ++t) {
    const ConePoint m0 = zero_level_point(spec, cfg.seed, static_cast<uint64_t>(t));
    const CounterRng rng(cfg.seed, 11);
    const double tau = 0.1 + 1.5 * rng.u01(static_cast<uint64_t>(t), 3);
    const double r2 = m0.rho2();
    const ConePoint end = flow(m0, tau, spec, fcfg).endpoint;
    w_rho = std::max(w_rho, std::abs(end.rho2() - r2 * std::cosh(2 * tau)) / r2);
    w_x1 = std::max(w_x1,
                    std::abs(moment_map(spec, end)[0] - 0.5 * r2 * std::sinh(2 * tau)) / r2);
    const double x1t = 0.3 + rng.u01(static_cast<uint64_t>(t), 5);
    const double tau2 = tau_to_level(m0, x1t, spec, fcfg);
    w_tau = std::max(w_tau, std::abs(tau2 - 0.5 * std::asinh(2 * x1t / r2)));
    const double f = f_potential(m0, {x1t, 0, 0}, spec, fcfg);
    const double fc = 0.5 * std::sqrt(r2 * r2 + 4 * x1t * x1t) - x1t * std::asinh(2 * x1t / r2);
    w_f = std::max(w_f, std::abs(f - fc));
    // round trip of Phi_a
    const ConePoint p = rng.cone_point(static_cast<uint64_t>(t), spec.n());
    const ConePoint fwd = phi_a(p, spec, cfg.a, fcfg);
    w_round = std::max(
        w_round, (phi_a_inverse(fwd, spec, cfg.a, fcfg).endpoint.coords - p.coords).norm() / p.rho());
  }
  const double tol = 1e-8 * cfg.tol_scale;
  res.add("flow_maps.flow/tc_rho2", "max_rel_err", w_rho, tol, w_rho < tol, cfg.seed, tm.ms());
  res.add("flow_maps.flow/tc_x1", "max_rel_err", w_x1, tol, w_x1 < tol, cfg.seed, tm.ms());
  res.add("flow_maps.tau_to_level/tc_tau", "max_err", w_tau, tol, w_tau < tol, cfg.seed, tm.ms());
  res.add("flow_maps.f_potential/tc_f", "max_err", w_f, tol, w_f < tol, cfg.seed, tm.ms());
  res.add("flow_maps.phi_a_inverse/round_trip", "max_rel_err", w_round, tol, w_round < tol,
          cfg.seed, tm.ms());
  return res;
}

SuiteResult suite_curvature_scan(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "curvature-scan";
  Timer tm;
  const CircleActionSpec spec = spec_of(cfg);
  const int n = spec.n();

  // pipeline validation first
  {
    const MetricField flat = [n](const Eigen::VectorXd& p) {
      return Eigen::MatrixXd::Identity(p.size(), p.size());
    };
    Eigen::VectorXd p0 = Eigen::VectorXd::Zero(4);
    p0 << 0.2, -0.4, 0.1, 0.3;
    Eigen::VectorXd X = Eigen::VectorXd::Zero(4), Y = Eigen::VectorXd::Zero(4);
    X[0] = 1;
    Y[1] = 1;
    const double kflat = std::abs(sectional_curvature(flat, p0, X, Y, 1e-3));
    res.add("geometry_probes.sectional_curvature/flat", "abs_K", kflat, 1e-6 * cfg.tol_scale,
            kflat < 1e-6 * cfg.tol_scale, cfg.seed, tm.ms());
    const double ksph = sectional_curvature(sphere_chart_field(4), p0, X, Y, 1e-3);
    res.add("geometry_probes.sectional_curvature/sphere", "K_minus_1", std::abs(ksph - 1.0),
            1e-4 * cfg.tol_scale, std::abs(ksph - 1.0) < 1e-4 * cfg.tol_scale, cfg.seed, tm.ms());
  }

  // |K| rho_hat along a ray for the deformed metric; |K| rho^2 control at a=0
  const MetricField ga = metric_field_ga(spec, cfg.a);
  const MetricField g0 = metric_field_ga(spec, 0.0);
  const CounterRng rng(cfg.seed, 5);
  const Eigen::VectorXd dir = rng.unit_vector(1, 4 * n);
  const FlowConfig fcfg{};

  double running_max = 0.0;
  double prev_oct_max = -1.0;
  double worst_growth = 0.0;
  double running_max0 = 0.0, prev0 = -1.0, worst_growth0 = 0.0;
  const int per_octave = 4;
  for (double lo = 1.0; lo < 100.0; lo *= 2.0) {
    double oct_max = 0.0, oct_max0 = 0.0;
    for (int i = 0; i < per_octave; ++i) {
      const double rho = lo * std::pow(2.0, double(i) / per_octave);
      const ConePoint m{Eigen::VectorXd(rho * dir)};
      // two coordinate planes orthonormalized against g_a
      for (int plane = 0; plane < 2; ++plane) {
        Eigen::VectorXd X = Eigen::VectorXd::Zero(4 * n), Y = Eigen::VectorXd::Zero(4 * n);
        X[plane] = 1;
        Y[(plane + 1 + plane % 2) % (4 * n)] = 1;
        const Eigen::MatrixXd g = ga(m.coords);
        X /= std::sqrt(X.dot(g * X));
        Y -= X * X.dot(g * Y);
        Y /= std::sqrt(Y.dot(g * Y));
        const double h = 1e-4 * std::max(1.0, rho);
        const double K = sectional_curvature(ga, m.coords, X, Y, h);
        const double rho_hat = distance_upper(m, spec, cfg.a, fcfg);
        oct_max = std::max(oct_max, std::abs(K) * rho_hat);
        const double K0 = sectional_curvature(g0, m.coords, X, Y, h);
        oct_max0 = std::max(oct_max0, std::abs(K0) * m.rho2());
      }
    }
    running_max = std::max(running_max, oct_max);
    running_max0 = std::max(running_max0, oct_max0);
    if (lo >= 10.0) {
      if (prev_oct_max > 0.0) worst_growth = std::max(worst_growth, running_max / prev_oct_max - 1.0);
      if (prev0 > 0.0) worst_growth0 = std::max(worst_growth0, running_max0 / prev0 - 1.0);
    }
    prev_oct_max = running_max;
    prev0 = running_max0;
  }
  res.add("geometry_probes.sectional_curvature/K_rhohat_growth", "per_octave_growth", worst_growth,
          0.10, worst_growth < 0.10, cfg.seed, tm.ms());
  res.add("geometry_probes.sectional_curvature/a0_K_rho2_growth", "per_octave_growth",
          worst_growth0, 0.10, worst_growth0 < 0.10, cfg.seed, tm.ms());
  return res;
}

SuiteResult suite_volume_growth(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "volume-growth";
  Timer tm;
  const CircleActionSpec spec = spec_of(cfg);
  const auto vg = volume_growth(spec, cfg.a, cfg.radii, cfg.samples, cfg.seed);
  const double expect = (cfg.a == 0.0) ? 4.0 * spec.n() : 4.0 * spec.n() - 1.0;
  const double tol = (cfg.a == 0.0 ? 0.1 : (spec.n() == 1 ? 0.15 : 0.3)) * cfg.tol_scale;
  res.add("geometry_probes.volume_growth/slope", "loglog_slope", vg.slope, tol,
          std::abs(vg.slope - expect) < tol, cfg.seed, tm.ms());
  for (const auto& e : vg.estimates) {
    res.add("geometry_probes.volume_growth/estimate_R" + std::to_string((int)e.R), "volume",
            e.volume, e.stderr_, true, e.seed, tm.ms());
  }
  return res;
}

SuiteResult suite_twist_compare(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "twist-compare";
  Timer tm;
  const auto spec = CircleActionSpec::standard(std::max(2, cfg.n));
  const FlowConfig fcfg{};
  const ConePoint base = zero_level_point(spec, cfg.seed, 0, 2.0);
  const Eigen::Vector3d x(0.8, 0, 0);
  const TwistPoint tp = make_twist_point(base, x, spec);
  const PullbackMetric pm = pullback_metric(tp, spec, cfg.a, fcfg);
  const int hd = static_cast<int>(pm.horizontal.cols());
  const ConePoint img = twist_map(tp, spec, fcfg);
  const double V = connection_data(spec, img).V;

  const double e1 = std::abs(pm.matrix(hd + 1, hd + 1) - (V + cfg.a * cfg.a)) /
                    (V + cfg.a * cfg.a);
  res.add("twist_coordinates.pullback_metric/dx1_block", "rel_err", e1, 1e-5 * cfg.tol_scale,
          e1 < 1e-5 * cfg.tol_scale, cfg.seed, tm.ms());
  const double e2 = std::max(std::abs(pm.matrix(hd + 1, hd + 2)), std::abs(pm.matrix(hd + 1, hd + 3)));
  res.add("twist_coordinates.pullback_metric/x_cross_terms", "abs_err", e2, 1e-6 * cfg.tol_scale,
          e2 < 1e-6 * cfg.tol_scale, cfg.seed, tm.ms());
  const double e3 = std::abs(pm.matrix(hd, hd) - 1.0 / (V + cfg.a * cfg.a));
  res.add("twist_coordinates.pullback_metric/fiber_block", "abs_err", e3, 1e-6 * cfg.tol_scale,
          e3 < 1e-6 * cfg.tol_scale, cfg.seed, tm.ms());

  // deviation along a ray: running max of dev * rho_hat^2 stable per octave
  double running = 0.0, prev = -1.0, growth = 0.0;
  for (double rho : {4.0, 8.0, 16.0, 32.0}) {
    const TwistPoint t2 = make_twist_point(base.scaled(rho / base.rho()), x, spec);
    const double dev = asymptotic_deviation(t2, spec, cfg.a, fcfg);
    const double rho_hat = distance_upper(twist_map(t2, spec, fcfg), spec, cfg.a, fcfg);
    running = std::max(running, dev * rho_hat * rho_hat);
    if (prev > 0.0) growth = std::max(growth, running / prev - 1.0);
    prev = running;
  }
  res.add("twist_coordinates.asymptotic_deviation/n2_rate", "per_octave_growth", growth, 0.10,
          growth < 0.10, cfg.seed, tm.ms());
  return res;
}

SuiteResult suite_gh_probe(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "gh-probe";
  Timer tm;
  const CircleActionSpec spec = spec_of(cfg);
  const FlowConfig fcfg{};
  const Eigen::Vector3d x1(1.0, 0, 0), x2(0.3, 0.6, -0.2);
  const auto rows = gh_probe(nullptr, x1, x2, {1.0, 0.1, 0.01}, spec, cfg.a, fcfg);
  bool monotone = true;
  for (size_t i = 1; i < rows.size(); ++i) monotone = monotone && rows[i].gap < rows[i - 1].gap;
  res.add("geometry_probes.gh_probe/gap_monotone", "monotone", monotone ? 1.0 : 0.0, 1.0, monotone,
          cfg.seed, tm.ms());
  const double rel = rows.back().gap / rows.back().model;
  res.add("geometry_probes.gh_probe/gap_at_lambda_0.01", "rel_gap", rel, 0.05 * cfg.tol_scale,
          rel < 0.05 * cfg.tol_scale, cfg.seed, tm.ms());
  for (const auto& r : rows)
    res.add("geometry_probes.gh_probe/upper_lambda_" + std::to_string(r.lambda), "upper", r.upper,
            r.model, r.gap >= 0.0, cfg.seed, tm.ms());
  return res;
}

SuiteResult suite_locally_free(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "locally-free";
  Timer tm;
  SearchSpec ss;
  if (cfg.lf_case == "su") ss.kind = ActionCase::SU;
  else if (cfg.lf_case == "so") ss.kind = ActionCase::SO;
  else if (cfg.lf_case == "g2") ss.kind = ActionCase::G2;
  else if (cfg.lf_case == "sphere") ss.kind = ActionCase::SphereWeighted;
  else throw std::invalid_argument("locally-free: case must be su/so/g2/sphere");
  ss.weights = parse_int_list(cfg.lf_weights);
  if (ss.kind == ActionCase::SO) ss.l = 2 * static_cast<int>(ss.weights.size()) + 1;

  const int starts = static_cast<int>(std::min<long long>(cfg.samples, 128));
  const Certificate cert = locally_free_search(ss, std::max(8, starts), cfg.seed);
  const bool expect_free = weights_locally_free_exact(ss);
  const bool agrees = (cert.verdict == Verdict::LocallyFree && expect_free) ||
                      (cert.verdict == Verdict::NotLocallyFree && !expect_free) ||
                      (ss.kind == ActionCase::G2 && !expect_free);  // converse not claimed
  res.add("quotient_actions.locally_free_search/verdict", "min_defect", cert.min_defect,
          expect_free ? 1e-6 : 1e-10, agrees, cfg.seed, tm.ms());
  res.add("quotient_actions.locally_free_search/exact_predicate", "locally_free",
          expect_free ? 1.0 : 0.0, 1.0, agrees, cfg.seed, tm.ms());
  if (!cert.note.empty())
    res.add("quotient_actions.locally_free_search/quotient_label", "label_attached", 1.0, 1.0, true,
            cfg.seed, tm.ms());

  // identity and grid cross-checks on NC / NH
  const CounterRng rng(cfg.seed, 9);
  double wid = 0.0;
  Eigen::VectorXi w(4);
  w << 2, -1, 3, 7;
  for (long long t = 0; t < std::min<long long>(cfg.samples, 10000); ++t) {
    const ConstraintPoint p =
        project_to_manifold(ConePoint(rng.gaussian_vector(static_cast<uint64_t>(t), 16)),
                            ManifoldTag::NC);
    double r = 0.0;
    defect_su(w, p, &r);
    wid = std::max(wid, r);
  }
  res.add("quotient_actions.defect_su/identity", "max_residual", wid, 1e-12 * cfg.tol_scale,
          wid < 1e-12 * cfg.tol_scale, cfg.seed, tm.ms());

  Eigen::VectorXi b(2);
  b << 1, 2;
  double wgrid = 0.0;
  for (long long t = 0; t < 40; ++t) {
    const ConstraintPoint p = project_to_manifold(
        rng.cone_point(static_cast<uint64_t>(t), 5, 0.5, 2.0), ManifoldTag::NH);
    const double closed = defect_sp1(b, p).defect;
    const double grid = defect_sp1_grid(b, p, 2);
    wgrid = std::max(wgrid, closed - grid);  // closed form must not exceed the grid minimum
  }
  res.add("quotient_actions.defect_sp1/eigen_vs_grid", "max_excess", wgrid, 1e-8 * cfg.tol_scale,
          wgrid < 1e-8 * cfg.tol_scale, cfg.seed, tm.ms());
  return res;
}

SuiteResult suite_gamma_check(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "gamma-check";
  Timer tm;
  const int n = std::max(1, cfg.n);
  const auto spec = CircleActionSpec::standard(n);
  const double th = M_PI / n;
  const Quaternion zeta(std::cos(th), std::sin(th), 0, 0);
  const int samples = static_cast<int>(std::min<long long>(cfg.samples, 1000));

  const GammaReport good =
      gamma_compat_check({left_mult_blockdiag(zeta, n)}, spec, samples, cfg.seed);
  res.add("quotient_actions.gamma_compat_check/cyclic", "pass", good.all_pass ? 1.0 : 0.0, 1.0,
          good.all_pass, cfg.seed, tm.ms());

  const GammaReport trivial = gamma_compat_check(
      {Eigen::MatrixXd::Identity(4 * n, 4 * n)}, spec, samples, cfg.seed);
  res.add("quotient_actions.gamma_compat_check/trivial", "pass", trivial.all_pass ? 1.0 : 0.0, 1.0,
          trivial.all_pass, cfg.seed, tm.ms());

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4 * n, 4 * n);
  const double c = std::cos(0.3), s = std::sin(0.3);
  for (int k = 0; k < 2; ++k) {
    bad(k, k) = c;
    bad(k, k + 2) = s;
    bad(k + 2, k) = -s;
    bad(k + 2, k + 2) = c;
  }
  const GammaReport broken = gamma_compat_check({bad}, spec, samples, cfg.seed);
  res.add("quotient_actions.gamma_compat_check/broken_generator_detected", "pass",
          broken.all_pass ? 0.0 : 1.0, 1.0, !broken.all_pass, cfg.seed, tm.ms());
  return res;
}

SuiteResult suite_gluing_check(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "gluing-check";
  Timer tm;
  const auto spec = CircleActionSpec::standard(cfg.n);
  GluingConfig g;
  g.a = cfg.a;
  g.c = cfg.c;
  g.alpha = cfg.alpha;
  g.S = 4.0;  // bump profile: default small amplitude, support {K_ALF <= 3R}

  const auto [C, S] = select_CS(g, spec, 100000, cfg.seed);
  res.add("gluing_potentials.select_CS/selected_C", "C", C, 0.0, std::isfinite(C), cfg.seed,
          tm.ms());
  res.add("gluing_potentials.select_CS/selected_S", "S", S, 0.0, std::isfinite(S), cfg.seed,
          tm.ms());
  res.add("gluing_potentials.config/bump_amplitude", "stand_in_profile", g.bump_amplitude, 0.0,
          true, cfg.seed, tm.ms());

  // positivity across the five regions
  const std::array<std::pair<double, double>, 5> bands = {{{0.05, 2.0 * g.R},
                                                           {2.0 * g.R, 3.0 * g.R},
                                                           {3.0 * g.R, 2.0 * g.S * g.R},
                                                           {2.0 * g.S * g.R, 3.0 * g.S * g.R},
                                                           {3.0 * g.S * g.R, 9.0 * g.S * g.R}}};
  const long long per_band = std::max<long long>(10, cfg.samples / 5);
  double min_eig = std::numeric_limits<double>::infinity();
  for (size_t bnd = 0; bnd < bands.size(); ++bnd) {
    for (long long i = 0; i < per_band; ++i) {
      const ConePoint m = sample_kalf_band(spec, g, bands[bnd].first, bands[bnd].second,
                                           cfg.seed + bnd, static_cast<uint64_t>(i));
      const GluingTerms t = assemble_terms(m, g, spec);
      OmegaHat oh;
      oh.W = t.omega_Y + t.zeta_v + g.C_glue * t.cut_h_alpha + g.c * t.h_one;
      min_eig = std::min(min_eig, omega_hat_min_eig(oh, t, g.c));
    }
  }
  res.add("gluing_potentials.omega_hat/min_eig_all_regions", "min_generalized_eig", min_eig, 0.0,
          min_eig > 0.0, cfg.seed, tm.ms());

  // f_hat vanishes outside {K_ALF <= 3SR}
  double worst_f = 0.0;
  for (long long i = 0; i < std::max<long long>(10, cfg.samples / 10); ++i) {
    const ConePoint m = sample_kalf_band(spec, g, 3.2 * g.S * g.R, 12.0 * g.S * g.R, cfg.seed + 9,
                                         static_cast<uint64_t>(i));
    worst_f = std::max(worst_f, std::abs(ricci_potential_fhat(m, g, spec)));
  }
  res.add("gluing_potentials.ricci_potential_fhat/outer_region", "max_abs", worst_f,
          1e-7 * cfg.tol_scale, worst_f < 1e-7 * cfg.tol_scale, cfg.seed, tm.ms());

  // S-decay of the cut h_alpha term against i ddbar h_1: slope -(1 - alpha)
  std::vector<double> Ss = {8, 16, 32, 64}, ratios;
  for (double Sv : Ss) {
    GluingConfig gs = g;
    gs.S = Sv;
    double sup = 0.0;
    for (long long i = 0; i < 20; ++i) {
      const ConePoint m = sample_kalf_band(spec, gs, 2.0 * Sv * gs.R, 3.0 * Sv * gs.R,
                                           cfg.seed + 31, static_cast<uint64_t>(i));
      const GluingTerms t = assemble_terms(m, gs, spec);
      const Eigen::MatrixXd I1 = complex_structure(1, spec.n());
      const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(
          hermitian_pairing(t.cut_h_alpha, I1), hermitian_pairing(t.h_one, I1));
      sup = std::max(sup, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    ratios.push_back(sup);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < Ss.size(); ++i) {
    const double lx = std::log(Ss[i]), ly = std::log(ratios[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double nS = double(Ss.size());
  const double slope = (nS * sxy - sx * sy) / (nS * sxx - sx * sx);
  const double expect = -(1.0 - g.alpha);
  res.add("gluing_potentials.select_CS/S_decay_slope", "loglog_slope", slope, 0.1,
          std::abs(slope - expect) < 0.1, cfg.seed, tm.ms());
  return res;
}

SuiteResult suite_expansion_fit(const ExperimentConfig& cfg) {
  SuiteResult res;
  res.suite = "expansion-fit";
  Timer tm;
  const auto spec = CircleActionSpec::standard(std::max(2, cfg.n));
  const FlowConfig fcfg{};
  const ConePoint m0 = zero_level_point(spec, cfg.seed, 0);
  std::vector<double> xs;
  for (int i = 1; i <= 12; ++i) xs.push_back(0.05 * m0.rho2() * i / 12.0);
  const ExpansionFit fit = fit_expansion(m0, spec, fcfg, xs);
  res.add("flow_maps.fit_expansion/k0", "k0_minus_half", std::abs(fit.k[0] - 0.5),
          1e-6 * cfg.tol_scale, std::abs(fit.k[0] - 0.5) < 1e-6 * cfg.tol_scale, cfg.seed, tm.ms());
  res.add("flow_maps.fit_expansion/k1", "abs_k1", std::abs(fit.k[1]), 1e-5 * cfg.tol_scale,
          std::abs(fit.k[1]) < 1e-5 * cfg.tol_scale, cfg.seed, tm.ms());
  res.add("flow_maps.fit_expansion/k2", "k2_plus_one", std::abs(fit.k[2] + 1.0),
          1e-3 * cfg.tol_scale, std::abs(fit.k[2] + 1.0) < 1e-3 * cfg.tol_scale, cfg.seed, tm.ms());
  res.add("flow_maps.fit_expansion/conditioned", "well_conditioned", fit.well_conditioned ? 1 : 0,
          1.0, fit.well_conditioned, cfg.seed, tm.ms());
  return res;
}

SuiteResult run_suite(const ExperimentConfig& cfg) {
  cfg.validate();
  SuiteResult res;
  if (cfg.suite == "verify-structure") res = suite_verify_structure(cfg);
  else if (cfg.suite == "flow-oracle") res = suite_flow_oracle(cfg);
  else if (cfg.suite == "curvature-scan") res = suite_curvature_scan(cfg);
  else if (cfg.suite == "volume-growth") res = suite_volume_growth(cfg);
  else if (cfg.suite == "twist-compare") res = suite_twist_compare(cfg);
  else if (cfg.suite == "gh-probe") res = suite_gh_probe(cfg);
  else if (cfg.suite == "locally-free") res = suite_locally_free(cfg);
  else if (cfg.suite == "gamma-check") res = suite_gamma_check(cfg);
  else if (cfg.suite == "gluing-check") res = suite_gluing_check(cfg);
  else if (cfg.suite == "expansion-fit") res = suite_expansion_fit(cfg);
  else throw std::invalid_argument("unknown suite '" + cfg.suite + "'");

  if (!cfg.out.empty()) {
    write_csv(cfg.out + ".csv", res);
    write_json(cfg.out + ".json", res);
  }
  return res;
}

}  // namespace tnut
