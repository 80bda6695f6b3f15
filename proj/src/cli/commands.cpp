#include "dsrig/cli/commands.hpp"

#include "dsrig/cli/report.hpp"
#include "dsrig/errors.hpp"
#include "dsrig/integrals.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace dsrig::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<double> parse_numbers(std::istringstream& is, const std::string& text) {
  std::vector<double> v;
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw ParseError("bad number '" + tok + "' in matrix '" + text + "'");
    }
  }
  return v;
}

int parse_size(std::istringstream& is, const std::string& text) {
  int n = 0;
  std::string rest;
  if (!(is >> n) || (is >> rest)) throw ParseError("expected a size in '" + text + "'");
  if (n < 1 || n > SymOperator::kMaxDim) throw ParseError("matrix size must be 1..8 in '" + text + "'");
  return n;
}

// Writes `report` and reports an exception in a uniform way.
int fail_invalid(const Error& e, const CommonOptions& opts, const std::string& command, std::ostream& err) {
  err << "error: " << e.kind() << ": " << e.what() << '\n';
  if (!opts.report_path.empty()) {
    std::ofstream f(opts.report_path);
    f << "env command=" << command << '\n'
      << "error kind=" << e.kind() << " message=" << std::quoted(std::string(e.what())) << '\n'
      << "verdict invalid\n";
  }
  return kExitInvalid;
}

void finish(const RunReport& report, const CommonOptions& opts, std::ostream& out) {
  report.write_summary(out);
  if (!opts.report_path.empty()) report.save(opts.report_path);
}

void echo_env(RunReport& report, const ExperimentConfig& cfg, const CommonOptions& opts) {
  report.env("version", kVersion);
  report.env("config_path", opts.config_path);
  for (const auto& [k, v] : cfg.echo()) report.env(k, v);
}

// Runs `body`, mapping library errors to exit code 2.
int guarded(const std::string& command, const CommonOptions& opts, std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    return fail_invalid(e, opts, command, err);
  }
}

double minkowski_norm_residual(const PointGeometry& p) {
  const AmbientMetricJet amb = metric_jet(p.height, p.node.theta);
  double r = std::abs(p.nu.dot(amb.g_bar * p.nu) + 1.0);
  for (int i = 0; i < 2; ++i) r = std::max(r, std::abs(p.nu.dot(amb.g_bar * p.tangent(i))));
  return r;
}

}  // namespace

SymOperator parse_matrix(const std::string& text) {
  std::istringstream is(text);
  std::string head;
  if (!(is >> head)) throw ParseError("empty matrix");
  if (head == "identity") return SymOperator::identity(parse_size(is, text));
  if (head == "zero") return SymOperator::zero(parse_size(is, text));
  if (head == "diag") {
    const auto d = parse_numbers(is, text);
    if (d.empty() || d.size() > SymOperator::kMaxDim) throw ParseError("diag needs 1..8 entries in '" + text + "'");
    return SymOperator::diagonal(d);
  }
  std::vector<std::vector<double>> rows;
  std::stringstream all(text);
  std::string row;
  while (std::getline(all, row, ';')) {
    std::istringstream rs(row);
    rows.push_back(parse_numbers(rs, text));
  }
  const std::size_t n = rows.size();
  if (n == 0 || n > SymOperator::kMaxDim) throw ParseError("matrix needs 1..8 rows in '" + text + "'");
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ParseError("matrix '" + text + "' is not square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return SymOperator(m);
}

ExperimentConfig resolve_config(const CommonOptions& opts) {
  ExperimentConfig cfg = opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  if (opts.quad) {
    cfg.n_theta = opts.quad->first;
    cfg.n_phi = opts.quad->second;
  }
  for (const auto& item : opts.tol_overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("--tol expects NAME=VALUE, got '" + item + "'");
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw ParseError("--tol expects NAME=VALUE, got '" + item + "'");
    }
    cfg.tolerances.set(item.substr(0, eq), v);
  }
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

// ---------------------------------------------------------------------------

int cmd_check_cone(const std::vector<std::string>& matrices, int random_count, const CommonOptions& opts,
                   std::ostream& out, std::ostream& err) {
  return guarded("check-cone", opts, err, [&] {
    RunReport report("check-cone");
    report.env("version", kVersion);
    if (matrices.size() > 2) throw ParseError("check-cone takes one or two matrices");
    if (matrices.empty() && random_count <= 0) throw ParseError("give one or two matrices, or --random COUNT");

    std::vector<SymOperator> ops;
    for (const auto& m : matrices) ops.push_back(parse_matrix(m));
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const ConeReport c = cone_classify(ops[k]);
      std::ostringstream d;
      d << "t1=" << format_number(c.t1) << " t2=" << format_number(c.t2) << " label=" << to_string(c.label);
      report.env("matrix" + std::to_string(k + 1), matrices[k]);
      report.info("cone_" + std::to_string(k + 1), "Garding cone C(sigma2, I)", c.discriminant, d.str());
      out << "cone matrix=" << k + 1 << ' ' << d.str() << " discriminant=" << format_number(c.discriminant) << '\n';
    }
    if (ops.size() == 2) {
      if (ops[0].dim() != ops[1].dim()) throw DimensionMismatch("matrices have different sizes");
      const GardingGap g = garding_gap(ops[0], ops[1]);
      std::ostringstream d;
      d << "sigma11=" << format_number(g.sigma11) << " geo_mean=" << format_number(g.geo_mean)
        << " equality=" << (g.equality ? "true" : "false") << " scale=" << format_number(g.scale);
      out << "garding gap=" << format_number(g.gap) << ' ' << d.str() << '\n';
      report.check("garding_gap", "Thm Garding inequality", -g.gap, kEqualityTol, d.str());
    }

    if (random_count > 0) {
      const unsigned seed = opts.seed.value_or(20240229u);
      report.env("seed", std::to_string(seed));
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> entry(-5.0, 5.0);
      std::uniform_real_distribution<double> shift(0.05, 2.0);
      std::uniform_int_distribution<int> dim(2, 6);
      const auto random_sym = [&](int n) {
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i) {
          for (int j = i; j < n; ++j) a(i, j) = a(j, i) = entry(rng);
        }
        return SymOperator(a);
      };
      // Pushes W into PlusCone along the identity direction: adding s I moves
      // both roots of t -> sigma_2(W + t I) by -s, so s > t2 suffices.
      const auto into_cone = [&](const SymOperator& w) {
        const ConeReport c = cone_classify(w);
        return w + (shift(rng) + c.t2) * SymOperator::identity(w.dim());
      };
      double worst_disc = 0.0, worst_gap = 0.0;
      for (int k = 0; k < random_count; ++k) {
        const int n = dim(rng);
        const SymOperator w = random_sym(n);
        const ConeReport c = cone_classify(w);
        const double nn = n;
        const double scale = std::pow((nn - 1) * sigma1(w), 2) + 4.0 * std::abs(nn * (nn - 1) / 2 * sigma2(w));
        worst_disc = std::max(worst_disc, -c.discriminant / std::max(scale, 1.0));
        const GardingGap g = garding_gap(into_cone(w), into_cone(random_sym(n)));
        worst_gap = std::max(worst_gap, -g.gap);
      }
      report.check("hyperbolicity_sigma2", "Sigma2 hyperbolic w.r.t. I", worst_disc, kHyperbolicityTol,
                   std::to_string(random_count) + " random matrices");
      report.check("garding_random", "Thm Garding inequality", worst_gap, 1e-12,
                   std::to_string(random_count) + " random PlusCone pairs");
    }
    finish(report, opts, out);
    return report.passed() ? kExitPass : kExitFail;
  });
}

int cmd_geometry(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("geometry", opts, err, [&] {
    const ExperimentConfig cfg = resolve_config(opts);
    cfg.require_single_surface();
    const GraphSurface s = cfg.surface->build();
    const QuadratureRule rule = QuadratureRule::gauss_sphere(cfg.n_theta, cfg.n_phi);
    const auto& tol = cfg.tolerances;

    RunReport report("geometry");
    echo_env(report, cfg, opts);
    report.env("surface", s.describe());

    double normal = 0.0, frame = 0.0, pre = 0.0, pre_stated = 0.0, gauss = 0.0, gauss_stated = 0.0;
    double newton = 0.0, reflection = 0.0;
    bool future = true, mirrored = true;
    double mean_height = 0.0;
    const GraphSurface reflected = reflect_surface(s);
    for (const ChartPoint u : rule.nodes) {
      const PointGeometry p = point_geometry(s, u);
      mean_height += p.height / static_cast<double>(rule.size());
      if (cfg.selected("normal")) {
        normal = std::max(normal, minkowski_norm_residual(p));
        future = future && p.nu(0) > 0.0;
      }
      if (cfg.selected("frame")) {
        const double ortho = (p.frame.transpose() * p.g * p.frame - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
        frame = std::max({frame, ortho, p.frame_asymmetry});
      }
      if (cfg.selected("pre_integral")) {
        const PreIntegralCheck c = check_pre_integral(s, u);
        pre = std::max(pre, c.resolved);
        pre_stated = std::max(pre_stated, c.stated);
      }
      if (cfg.selected("sigma2_curvature")) {
        const Sigma2CurvatureCheck c = check_sigma2_curvature(s, u);
        gauss = std::max(gauss, c.residual);
        gauss_stated = std::max(gauss_stated, c.residual_as_stated);
      }
      if (cfg.selected("newton")) newton = std::max(newton, newton_divergence(s, u));
      if (cfg.selected("reflection")) {
        const PointGeometry r = point_geometry(reflected, u, {.hessian = false});
        reflection = std::max(reflection, (r.W + p.W).cwiseAbs().maxCoeff());
        if (p.sigma2 > kGateSigma2Min) {
          mirrored = mirrored && cone_classify(r.W_op()).label == mirror(cone_classify(p.W_op()).label);
        }
      }
    }

    if (cfg.selected("normal")) {
      report.check("normal", "unit timelike normal", normal, tol.get("normal"));
      report.flag("normal_future", "future-directed normal", future);
    }
    if (cfg.selected("frame")) report.check("frame", "orthonormal frame, self-adjoint W", frame, tol.get("frame"));
    if (cfg.selected("pre_integral")) {
      report.check("pre_integral", "Lemma preIntegral", pre, tol.get("pre_integral"),
                   "asserted Hess(Phi) = -(phi' g + h <V,nu>)");
      report.info("pre_integral_stated_sign", "Lemma preIntegral", pre_stated,
                  "residual of Hess(Phi) = phi' g + h <V,nu>");
    }
    if (cfg.selected("sigma2_curvature")) {
      report.check("sigma2_curvature", "Lemma sigma2KK", gauss, tol.get("sigma2_curvature"),
                   "asserted sigma2 = Kbar - K_norm");
      report.info("sigma2_curvature_stated_sign", "Lemma sigma2KK", gauss_stated,
                  "residual of sigma2 = K_norm - Kbar");
    }
    if (cfg.selected("newton")) report.check("newton_divergence", "Prop gradSigma2", newton, tol.get("newton"));
    if (cfg.selected("reflection")) {
      report.check("reflection_parity", "equator reflection W -> -W", reflection, tol.get("reflection"));
      report.flag("reflection_cone_mirror", "equator reflection swaps cones", mirrored);
    }
    if (cfg.selected("deriv_v")) {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> rho(-2.0, 2.0), theta(0.1, std::numbers::pi - 0.1),
          phi(0.0, 2.0 * std::numbers::pi);
      std::normal_distribution<double> comp(0.0, 1.0);
      double worst = 0.0;
      for (int k = 0; k < 100; ++k) {
        const DeSitterPoint p = DeSitterPoint::from_chart(rho(rng), theta(rng), phi(rng));
        const ChartVector a(comp(rng), comp(rng), comp(rng)), b(comp(rng), comp(rng), comp(rng));
        const double scale = a.norm() * b.norm() * std::cosh(p.rho) * std::cosh(p.rho);
        worst = std::max(worst, std::abs(lie_derivative_residual(p, a, b)) / scale);
      }
      report.check("deriv_v", "Lemma DerivV", worst, tol.get("deriv_v"), "100 random points and vector pairs");
    }
    const CriticalPointContraction cp = critical_point_contraction(mean_height);
    report.info("critical_point_contraction", "Eq Gamma0ij", cp.from_metric,
                "from metric tanh(rho); as stated cosh(rho) sinh(rho) = " + format_number(cp.as_stated));

    bool gate_ok = true;
    if (cfg.selected("gate")) {
      const GateReport g = curvature_gate(s, rule);
      gate_ok = g.passed;
      std::ostringstream d;
      d << "min sigma2 " << format_number(g.min_sigma2) << ", label " << to_string(g.label)
        << (g.labels_uniform ? "" : " (mixed labels)");
      report.flag("curvature_gate", "sigma2(W) > 0 hypothesis", g.passed, d.str());
    }
    finish(report, opts, out);
    if (!gate_ok) return kExitInvalid;
    return report.passed() ? kExitPass : kExitFail;
  });
}

int cmd_verify_identities(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("verify-identities", opts, err, [&] {
    const ExperimentConfig cfg = resolve_config(opts);
    const IsometricPair pair = cfg.build_pair();
    const QuadratureRule rule = QuadratureRule::gauss_sphere(cfg.n_theta, cfg.n_phi);
    const auto& tol = cfg.tolerances;

    RunReport report("verify-identities");
    echo_env(report, cfg, opts);
    report.env("surface", pair.M.describe());
    report.env("surface_tilde", pair.Mt.describe());

    const auto nodes = evaluate_pair(pair, rule);
    const IdentitySuite suite = verify_integral_identities(nodes, rule, tol.get("identity"));
    for (const auto& r : suite.identities) {
      const std::string id(to_string(r.id));
      const std::string anchor = "Theorem IntegralEqn (" + id + ")";
      std::ostringstream d;
      d << "lhs " << format_number(r.lhs) << ", rhs " << format_number(r.rhs) << "; " << r.sign_note;
      report.check("identity_" + id, anchor, r.residual_rel, tol.get("identity"), d.str());
      report.check("proof_step_" + id, anchor, r.proof_step_max, tol.get("pointwise"),
                   "pointwise algebraic step, proof sign");
      report.info("hessian_pointwise_" + id, anchor, r.pointwise_max, "max |lhs - rhs| integrand over nodes");
      report.info("identity_" + id + "_proof_sign", anchor, r.residual_proof);
      report.info("identity_" + id + "_statement_sign", anchor, r.residual_statement);
    }
    const TildeSymmetryReport t = verify_tilde_symmetry(nodes, rule, tol.get("tilde"));
    report.check("tilde_symmetry", "Theorem IntegralSym", t.residual_rel, tol.get("tilde"));
    double mismatch = 0.0;
    for (const auto& n : nodes) mismatch = std::max(mismatch, n.metric_mismatch);
    report.info("metric_mismatch", "f is a local isometry", mismatch);
    report.info("gate_min_sigma2_M", "sigma2(W) > 0 hypothesis", suite.gate_M.min_sigma2);
    report.info("gate_min_sigma2_Mt", "sigma2(W) > 0 hypothesis", suite.gate_Mt.min_sigma2);
    finish(report, opts, out);
    return report.passed() ? kExitPass : kExitFail;
  });
}

int cmd_rigidity(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded("rigidity", opts, err, [&] {
    const ExperimentConfig cfg = resolve_config(opts);
    const IsometricPair pair = cfg.build_pair();
    const QuadratureRule rule = QuadratureRule::gauss_sphere(cfg.n_theta, cfg.n_phi);
    const auto& tol = cfg.tolerances;

    RunReport report("rigidity");
    echo_env(report, cfg, opts);
    report.env("surface", pair.M.describe());
    report.env("surface_tilde", pair.Mt.describe());

    const RigidityTolerances rt{tol.get("metric"), tol.get("rigidity_integral"), tol.get("w_mismatch")};
    const RigidityReport r = rigidity_experiment(pair, rule, rt);
    report.flag("verdict", "Rigidity2", r.verdict == RigidityVerdict::Rigid,
                std::string(to_string(r.verdict)) + ": " + r.reason);
    if (r.verdict != RigidityVerdict::GateFailed) {
      report.check("metric_mismatch", "f is a local isometry", r.metric_mismatch, rt.metric);
      report.check("rigidity_integral", "Rigidity2", r.integral_rel, rt.integral_rel,
                   "integral " + format_number(r.integral_value) + " over area " + format_number(r.area));
      report.check("w_mismatch", "W = W~", r.max_W_mismatch, rt.w_mismatch);
    }
    report.info("sign_factor_min", "Rigidity2 sign factor", r.sign_factor_min);
    report.info("gap_max", "Thm Garding inequality", r.gap_max);
    report.info("gap_min", "Thm Garding inequality", r.gap_min);
    report.info("min_height", "region rho > 0", r.min_height);
    finish(report, opts, out);
    if (r.verdict == RigidityVerdict::GateFailed) {
      err << "error: GateFailed: " << r.reason << '\n';
      return kExitInvalid;
    }
    return report.passed() ? kExitPass : kExitFail;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for spacelike hypersurfaces in de Sitter space", "dsrig"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOptions opts;
  std::string quad;
  unsigned seed = 0;
  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opts.config_path, "experiment config (INI)");
    if (needs_config) c->required()->check(CLI::ExistingFile);
    sub->add_option("--quad", quad, "quadrature degrees NTHETAxNPHI");
    sub->add_option("--tol", opts.tol_overrides, "tolerance override NAME=VALUE")->take_all()->allow_extra_args(false);
    sub->add_option("--report", opts.report_path, "write machine-readable records here");
    sub->add_option("--seed", seed, "seed for random suites");
  };

  std::vector<std::string> matrices;
  int random_count = 0;
  auto* cone = app.add_subcommand("check-cone", "classify matrices against the sigma2 cone");
  cone->add_option("matrix", matrices, "e.g. \"diag 1 -2\", \"identity 2\", \"1 0.5; 0.5 2\"");
  cone->add_option("--random", random_count, "also run COUNT random hyperbolicity/Garding trials");
  add_common(cone, false);
  auto* geometry = app.add_subcommand("geometry", "pointwise lemma checks on one surface");
  add_common(geometry, true);
  auto* identities = app.add_subcommand("verify-identities", "integral identities on a surface pair");
  add_common(identities, true);
  auto* rigidity = app.add_subcommand("rigidity", "rigidity experiment on a surface pair");
  add_common(rigidity, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    if (!quad.empty()) opts.quad = parse_grid(quad);
  } catch (const Error& e) {
    return fail_invalid(e, opts, "dsrig", err);
  }
  for (auto* sub : {cone, geometry, identities, rigidity}) {
    if (sub->count_all() > 0 && sub->count("--seed") > 0) opts.seed = seed;
  }

  if (*cone) return cmd_check_cone(matrices, random_count, opts, out, err);
  if (*geometry) return cmd_geometry(opts, out, err);
  if (*identities) return cmd_verify_identities(opts, out, err);
  return cmd_rigidity(opts, out, err);
}

}  // namespace dsrig::cli
