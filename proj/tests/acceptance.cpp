// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.
// Informational lines (prefixed "info") never affect the exit code.

#include "dsrig/ambient.hpp"
#include "dsrig/errors.hpp"
#include "dsrig/hypersurface.hpp"
#include "dsrig/integrals.hpp"
#include "dsrig/quadrature.hpp"
#include "dsrig/symfun.hpp"
#include "generators.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace dsrig;
using std::numbers::pi;

namespace {

namespace tol {
constexpr double kSliceClosedForm = 1e-9;
constexpr double kDerivV = 1e-10;
constexpr double kPreIntegral = 1e-8;
constexpr double kSampledOrder = 1.9;  // observed ~2.0; see README
constexpr double kGardingGap = -1e-12;
constexpr double kMatchedMismatch = 1e-8;
constexpr double kRootImag = 1e-6;
constexpr double kReflection = 1e-8;
constexpr double kIdentity = 1e-6;
constexpr double kProofStep = 1e-8;
constexpr double kTilde = 1e-6;
constexpr double kRigidW = 1e-6;
constexpr double kRigidIntegral = 1e-8;
constexpr double kMismatchFloor = 1e-3;
constexpr double kNewton = 1e-6;
constexpr double kSphereArea = 1e-12;
constexpr double kSliceArea = 1e-10;
}  // namespace tol

int failures = 0;

void verdict(int id, bool ok, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

void info(const std::string& what) { std::printf("info: %s\n", what.c_str()); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

// Runs a criterion body, turning an unexpected library error into FAIL.
void criterion(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    verdict(id, false, std::string("unexpected ") + e.kind() + ": " + e.what());
  }
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

GraphSurface perturbed(double rho0, double eps, int l = 2, int m = 0) {
  return GraphSurface::analytic(AnalyticDescriptor::perturbed_slice(rho0, eps, l, m));
}

const QuadratureRule& rule64() {
  static const QuadratureRule r = QuadratureRule::gauss_sphere(64, 128);
  return r;
}

std::vector<IsometricPair> identity_pairs() {
  const auto boost = AmbientIsometry::boost(0.25, Eigen::Vector3d::UnitX());
  return {IsometricPair::ambient(perturbed(0.6, 0.05), AmbientIsometry::identity()),
          IsometricPair::ambient(GraphSurface::analytic(AnalyticDescriptor::slice(0.6)), boost),
          IsometricPair::ambient(perturbed(0.6, 0.05), boost)};
}

void slice_closed_forms() {
  const double r = 0.5, c = std::cosh(r), t = std::tanh(r);
  const auto s = GraphSurface::analytic(AnalyticDescriptor::slice(r));
  double worst = 0.0;
  for (const ChartPoint u : QuadratureRule::gauss_sphere(16, 32).nodes) {
    const PointGeometry p = point_geometry(s, u, {.hessian = true, .curvature = true});
    const Eigen::Matrix2d g = c * c * Eigen::Vector2d(1.0, std::pow(std::sin(u.theta), 2)).asDiagonal().toDenseMatrix();
    worst = std::max({worst, (p.g - g).cwiseAbs().maxCoeff(), (p.nu - Eigen::Vector3d::UnitX()).cwiseAbs().maxCoeff(),
                      std::abs(p.support + c), (p.W - t * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(),
                      p.hess_phi.cwiseAbs().maxCoeff(), std::abs(p.sigma2 - t * t),
                      std::abs(*p.K_norm - 1.0 / (c * c))});
  }
  verdict(1, worst <= tol::kSliceClosedForm,
          fmt("umbilic slice rho0=0.5 closed forms at 512 nodes: max error %.3g (tol %.0e)", worst,
              tol::kSliceClosedForm));
}

void deriv_v() {
  testgen::Gen gen(2);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto p = DeSitterPoint::from_chart(gen.uniform(-2, 2), gen.uniform(0.05, pi - 0.05), gen.uniform(0, 2 * pi));
    for (int pair = 0; pair < 5; ++pair) {
      const ChartVector a(gen.normal(), gen.normal(), gen.normal()), b(gen.normal(), gen.normal(), gen.normal());
      worst = std::max(worst, std::abs(lie_derivative_residual(p, a, b)));
    }
  }
  verdict(2, worst <= tol::kDerivV,
          fmt("conformal field D V = phi' g at 100 points x 5 vector pairs: max residual %.3g (tol %.0e)", worst,
              tol::kDerivV));
}

void pre_integral() {
  const auto nodes = QuadratureRule::gauss_sphere(16, 32).nodes;
  double worst = 0.0, worst_stated = 0.0;
  std::vector<GraphSurface> surfaces{GraphSurface::analytic(AnalyticDescriptor::slice(0.5)),
                                     GraphSurface::analytic(AnalyticDescriptor::slice(1.2))};
  for (double eps : {0.02, 0.05, 0.08}) {
    surfaces.push_back(perturbed(0.6, eps, 2, 0));
    surfaces.push_back(perturbed(0.8, eps, 3, 2));
  }
  for (const auto& s : surfaces)
    for (const ChartPoint u : nodes) {
      const PreIntegralCheck c = check_pre_integral(s, u);
      worst = std::max(worst, c.resolved);
      worst_stated = std::max(worst_stated, c.stated);
    }
  const auto a = perturbed(0.6, 0.05);
  const std::vector<ChartPoint> probes{{0.5, 0.3}, {1.0, 1.0}, {1.3, 2.2}, {2.0, 4.0}};
  std::vector<double> err;
  for (int n : {64, 128, 256}) {
    const auto s = GraphSurface::sampled(a.sample(n, 2 * n));
    double e = 0.0;
    for (const ChartPoint u : probes) e = std::max(e, check_pre_integral(s, u).resolved);
    err.push_back(e);
  }
  const double p1 = order(err[0], err[1]), p2 = order(err[1], err[2]);
  verdict(3, worst <= tol::kPreIntegral && std::min(p1, p2) >= tol::kSampledOrder,
          fmt("Hess(Phi) identity: analytic max %.3g (tol %.0e); sampled orders %.3f, %.3f", worst,
              tol::kPreIntegral, p1, p2) +
              fmt(" (min %.1f);", tol::kSampledOrder) +
              fmt(" errors 64/128/256 = %.3g/%.3g/%.3g", err[0], err[1], err[2]));
  info(fmt("Hess(Phi) identity with the stated sign: max residual %.3g (the sign-resolved form is asserted)",
           worst_stated));
}

void garding() {
  testgen::Gen gen(4);
  double worst_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100000; ++k) {
    const int n = gen.integer(2, 6);
    worst_gap = std::min(worst_gap, garding_gap(gen.plus_cone(n), gen.plus_cone(n)).gap);
  }
  int detected = 0;
  double worst_matched = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int n = gen.integer(2, 6);
    const SymOperator w = gen.plus_cone(n);
    const SymOperator wt = gen.uniform(0.1, 10.0) * w;
    if (garding_gap(w, wt).equality) ++detected;
    // Equality plus matched sigma_2 forces W = W~.
    const SymOperator matched = std::sqrt(sigma2(w) / sigma2(wt)) * wt;
    if (garding_gap(w, matched).equality)
      worst_matched = std::max(worst_matched, (w.matrix() - matched.matrix()).norm());
    else
      worst_matched = std::numeric_limits<double>::infinity();
  }
  verdict(4, worst_gap >= tol::kGardingGap && detected == 1000 && worst_matched <= tol::kMatchedMismatch,
          fmt("Garding: min gap over 1e5 cone pairs %.3g (floor %.0e); equality detected %g/1000; "
              "matched ||W - W~||_F max %.3g",
              worst_gap, tol::kGardingGap, detected, worst_matched) +
              fmt(" (tol %.0e)", tol::kMatchedMismatch));
}

void hyperbolicity() {
  testgen::Gen gen(5);
  int ok2 = 0;
  for (int k = 0; k < 10000; ++k) {
    try {
      const ConeReport r = cone_classify(gen.sym_operator(gen.integer(2, 8), gen.uniform(0.1, 10.0)));
      if (r.t1 <= r.t2) ++ok2;
    } catch (const NonHyperbolic&) {
    }
  }
  int okk = 0;
  double worst_imag = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = gen.integer(1, 4);
    const SymOperator w = gen.sym_operator(n);
    bool real = true;
    for (int k = 1; k <= n; ++k) {
      for (const auto& z : polynomial_roots(sigma_k_line_coefficients(w, k))) {
        const double rel = std::abs(z.imag()) / (1.0 + std::abs(z));
        worst_imag = std::max(worst_imag, rel);
        real = real && rel <= tol::kRootImag;
      }
    }
    if (real) ++okk;
  }
  verdict(5, ok2 == 10000 && okk == 1000,
          fmt("hyperbolicity w.r.t. I: sigma_2 real roots %g/10000 (discriminant tol 1e-9 relative); "
              "sigma_k (n<=4) all real %g/1000, max |Im|/(1+|z|) %.3g (tol %.0e)",
              ok2, okk, worst_imag, tol::kRootImag));
}

void reflection() {
  const auto nodes = QuadratureRule::gauss_sphere(16, 32).nodes;
  double worst = 0.0;
  int flipped = 0, total = 0;
  const std::vector<GraphSurface> surfaces{GraphSurface::analytic(AnalyticDescriptor::slice(0.5)), perturbed(0.6, 0.05),
                                           perturbed(0.8, 0.08, 3, 1)};
  for (const auto& s : surfaces) {
    const auto r = reflect_surface(s);
    for (const ChartPoint u : nodes) {
      const PointGeometry p = point_geometry(s, u, {.hessian = false}), q = point_geometry(r, u, {.hessian = false});
      worst = std::max(worst, (p.W + q.W).cwiseAbs().maxCoeff());
      const ConeLabel a = cone_classify(p.W_op()).label, b = cone_classify(q.W_op()).label;
      ++total;
      if (a == ConeLabel::PlusCone && b == ConeLabel::MinusCone) ++flipped;
    }
  }
  verdict(6, worst <= tol::kReflection && flipped == total,
          fmt("equator reflection: max |W(reflected) + W| %.3g (tol %.0e); PlusCone -> MinusCone at %g/%g nodes", worst,
              tol::kReflection, flipped, total));
}

void identities_and_symmetry() {
  const char* names[] = {"identity/perturbed", "boost/slice", "boost/perturbed"};
  double worst = 0.0, worst_step = 0.0, worst_tilde = 0.0, worst_proof = 0.0, worst_statement = 0.0;
  bool all = true;
  const auto pairs = identity_pairs();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto nodes = evaluate_pair(pairs[k], rule64());
    const IdentitySuite s = verify_integral_identities(nodes, rule64(), tol::kIdentity);
    for (const auto& r : s.identities) {
      worst = std::max(worst, r.residual_rel);
      worst_step = std::max(worst_step, r.proof_step_max);
      worst_proof = std::max(worst_proof, r.residual_proof);
      worst_statement = std::max(worst_statement, r.residual_statement);
      all = all && r.pass;
    }
    const double t = verify_tilde_symmetry(nodes, rule64(), tol::kTilde).residual_rel;
    worst_tilde = std::max(worst_tilde, t);
    info(std::string(names[k]) + fmt(": identities max residual_rel %.3g, tilde symmetry %.3g",
                                     std::max({s.identities[0].residual_rel, s.identities[1].residual_rel,
                                               s.identities[2].residual_rel, s.identities[3].residual_rel}),
                                     t));
  }
  verdict(7, all && worst <= tol::kIdentity && worst_step <= tol::kProofStep,
          fmt("integral identities (a)-(d) on 3 pairs at 64x128: max residual_rel %.3g (tol %.0e); "
              "proof step max %.3g (tol %.0e)",
              worst, tol::kIdentity, worst_step, tol::kProofStep));
  info(fmt("integral identities with the proof-step sign: max residual %.3g; with the statement sign: %.3g",
           worst_proof, worst_statement));
  verdict(8, worst_tilde <= tol::kTilde,
          fmt("tilde symmetry on the same pairs: max residual_rel %.3g (tol %.0e)", worst_tilde, tol::kTilde));
}

void rigidity() {
  bool rigid = true;
  double worst_w = 0.0, worst_int = 0.0;
  const auto boost = AmbientIsometry::boost(0.25, Eigen::Vector3d::UnitX());
  for (const auto& m : {GraphSurface::analytic(AnalyticDescriptor::slice(0.6)), perturbed(0.6, 0.05)}) {
    const RigidityReport r = rigidity_experiment(IsometricPair::ambient(m, boost), rule64());
    rigid = rigid && r.verdict == RigidityVerdict::Rigid;
    worst_w = std::max(worst_w, r.max_W_mismatch);
    worst_int = std::max(worst_int, r.integral_rel);
  }
  const RigidityReport neg = rigidity_experiment(
      IsometricPair::chart_identity(perturbed(0.6, 0.05), perturbed(0.6, 0.08)), rule64());
  const RigidityReport low = rigidity_experiment(
      IsometricPair::ambient(perturbed(0.05, 0.3, 1, 0), AmbientIsometry::identity()), QuadratureRule::gauss_sphere(16, 32));
  const bool ok = rigid && worst_w <= tol::kRigidW && worst_int <= tol::kRigidIntegral &&
                  neg.verdict == RigidityVerdict::NotIsometric && neg.metric_mismatch > tol::kMismatchFloor &&
                  low.verdict == RigidityVerdict::GateFailed;
  verdict(9, ok,
          fmt("rigidity: boosted pairs Rigid=%g, max ||W - W~|| %.3g, integral/area %.3g; negative control mismatch %.3g",
              rigid, worst_w, worst_int, neg.metric_mismatch) +
              " (" + std::string(to_string(neg.verdict)) + "); rho<=0 surface " + std::string(to_string(low.verdict)));
}

void newton() {
  testgen::Gen gen(10);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto s = GraphSurface::analytic(gen.small_graph(0.4, 0.9, 0.08));
    for (int j = 0; j < 20; ++j) worst = std::max(worst, newton_divergence(s, gen.chart_point(0.1)));
  }
  const auto a = perturbed(0.6, 0.05);
  const std::vector<ChartPoint> probes{{0.5, 0.3}, {1.0, 1.0}, {1.3, 2.2}, {2.0, 4.0}};
  std::vector<double> err;
  for (int n : {64, 128, 256}) {
    const auto s = GraphSurface::sampled(a.sample(n, 2 * n));
    double e = 0.0;
    for (const ChartPoint u : probes) e = std::max(e, newton_divergence(s, u));
    err.push_back(e);
  }
  const double p1 = order(err[0], err[1]), p2 = order(err[1], err[2]);
  verdict(10, worst <= tol::kNewton && std::min(p1, p2) >= tol::kSampledOrder,
          fmt("Newton tensor divergence: analytic max %.3g (tol %.0e); sampled orders %.3f, %.3f", worst, tol::kNewton,
              p1, p2) +
              fmt(" (min %.1f)", tol::kSampledOrder));
}

void quadrature() {
  const auto r = rule64();
  std::vector<double> v(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) v[k] = std::sin(r.nodes[k].theta);
  const double sphere = std::abs(integrate_nodes(v, r) - 4 * pi);
  double slice = 0.0;
  for (double rho0 : {0.0, 0.5, 1.0}) {
    const auto s = GraphSurface::analytic(AnalyticDescriptor::slice(rho0));
    const double area = integrate_over_M(s, [](ChartPoint) { return 1.0; }, r);
    const double exact = 4 * pi * std::pow(std::cosh(rho0), 2);
    slice = std::max(slice, std::abs(area - exact) / exact);
  }
  verdict(11, sphere <= tol::kSphereArea && slice <= tol::kSliceArea,
          fmt("quadrature 64x128: |int 1 - 4 pi| %.3g (tol %.0e); slice area rel error %.3g (tol %.0e)", sphere,
              tol::kSphereArea, slice, tol::kSliceArea));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion(1, slice_closed_forms);
  criterion(2, deriv_v);
  criterion(3, pre_integral);
  criterion(4, garding);
  criterion(5, hyperbolicity);
  criterion(6, reflection);
  identities_and_symmetry();
  criterion(9, rigidity);
  criterion(10, newton);
  criterion(11, quadrature);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("acceptance: %s (%d failed, %.1f s)\n", failures == 0 ? "PASS" : "FAIL", failures, secs);
  return failures == 0 ? 0 : 1;
}
