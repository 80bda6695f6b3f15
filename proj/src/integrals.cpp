#include "dsrig/integrals.hpp"

#include "dsrig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dsrig {

namespace {

constexpr int kDim = 2;
constexpr double kCorrespondenceTol = 1e-8;

double contract(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) { return (a.array() * b.array()).sum(); }

Eigen::Matrix2d dsigma2(const Eigen::Matrix2d& w) { return d_sigma2(SymOperator(w)); }

double polarized(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  return sigma11(SymOperator(a), SymOperator(b));
}

double sigma2_of(const Eigen::Matrix2d& w) { return sigma2(SymOperator(w)); }

std::vector<PointGeometry> geometries(const std::vector<PairNode>& nodes, bool tilde) {
  std::vector<PointGeometry> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(tilde ? n.geo_t : n.geo);
  return out;
}

void require_gates(const GateReport& m, const GateReport& mt) {
  const auto describe = [](const char* name, const GateReport& g) {
    std::ostringstream os;
    os << name << ": min sigma2 = " << g.min_sigma2 << " at (theta=" << g.worst.theta << ", phi=" << g.worst.phi
       << "), labels " << (g.labels_uniform ? "uniform" : "mixed");
    return os.str();
  };
  if (!m.passed) throw GateFailed("curvature gate failed on M; " + describe("M", m));
  if (!mt.passed) throw GateFailed("curvature gate failed on Mt; " + describe("Mt", mt));
}

}  // namespace

std::vector<PairNode> evaluate_pair(const IsometricPair& pair, const QuadratureRule& rule) {
  std::vector<PairNode> out;
  out.reserve(rule.size());
  for (const ChartPoint u : rule.nodes) {
    PairNode n;
    n.u = u;
    n.geo = point_geometry(pair.M, u);
    const Correspondence::Image img = pair.correspondence.map(u, pair.Mt);
    n.target = img.target;
    const Jet2 yt = pair.Mt.jet_near(img.target, u);
    if (pair.correspondence.kind() == Correspondence::Kind::Ambient &&
        std::abs(yt.v - img.tilde_height.v) > kCorrespondenceTol) {
      std::ostringstream os;
      os << "image of (theta=" << u.theta << ", phi=" << u.phi << ") has height " << img.tilde_height.v
         << " but Mt reads " << yt.v << " there";
      throw CorrespondenceInvalid(os.str());
    }
    n.geo_t = geometry_from_jet(yt, img.target);

    const Eigen::Matrix2d pushed = img.jacobian * n.geo.frame;
    const Eigen::Matrix2d wt = pushed.transpose() * n.geo_t.h * pushed;
    n.Wt = 0.5 * (wt + wt.transpose());

    const MetricJet m = pair.M.metric_jet(u);
    n.hess_phi_t = n.geo.frame.transpose() * surface_hessian(m, sinh(img.tilde_height)) * n.geo.frame;
    n.phi_p = polar::phi_prime(n.geo.height);
    n.phi_t_p = polar::phi_prime(img.tilde_height.v);
    n.area = std::sqrt(n.geo.g.determinant());
    n.metric_mismatch =
        (n.geo.g - img.jacobian.transpose() * n.geo_t.g * img.jacobian).cwiseAbs().maxCoeff();
    out.push_back(std::move(n));
  }
  return out;
}

std::string_view to_string(IdentityId id) {
  switch (id) {
    case IdentityId::A: return "a";
    case IdentityId::B: return "b";
    case IdentityId::C: return "c";
    case IdentityId::D: return "d";
  }
  return "?";
}

IdentitySuite verify_integral_identities(const IsometricPair& pair, const QuadratureRule& rule, double tol) {
  return verify_integral_identities(evaluate_pair(pair, rule), rule, tol);
}

IdentitySuite verify_integral_identities(const std::vector<PairNode>& nodes, const QuadratureRule& rule,
                                         double tol) {
  IdentitySuite suite;
  suite.gate_M = summarize_gate(geometries(nodes, false));
  suite.gate_Mt = summarize_gate(geometries(nodes, true));
  require_gates(suite.gate_M, suite.gate_Mt);

  const std::array<IdentityId, 4> ids{IdentityId::A, IdentityId::B, IdentityId::C, IdentityId::D};
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const IdentityId id = ids[k];
    std::vector<double> lhs(nodes.size()), t1(nodes.size()), t2(nodes.size()), abs1(nodes.size()),
        abs2(nodes.size());
    double pointwise = 0.0, proof_step = 0.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const PairNode& n = nodes[q];
      const Eigen::Matrix2d& w = n.geo.W;
      const Eigen::Matrix2d& wt = n.Wt;
      // Operator fed to d sigma_2, the weight in front of the Hessian, the
      // Hessian itself, and the support function / operator of that Hessian's surface.
      const bool tilde_op = id == IdentityId::B || id == IdentityId::D;
      const bool tilde_hess = id == IdentityId::C || id == IdentityId::D;
      const Eigen::Matrix2d& op = tilde_op ? wt : w;
      const double weight = tilde_hess ? n.phi_p : n.phi_t_p;
      const double own_phi_p = tilde_hess ? n.phi_t_p : n.phi_p;
      const Eigen::Matrix2d& hess = tilde_hess ? n.hess_phi_t : n.geo.hess_phi;
      const Eigen::Matrix2d& shape = tilde_hess ? wt : w;
      const double support = tilde_hess ? n.geo_t.support : n.geo.support;

      const Eigen::Matrix2d d = dsigma2(op);
      const double l = weight * contract(d, hess);
      const double term1 = (kDim - 1) * weight * own_phi_p * op.trace();
      const double term2 = weight * support * 2.0 * polarized(op, shape);
      pointwise = std::max(pointwise, std::abs(l + term1 + term2));
      const Eigen::Matrix2d step = weight * own_phi_p * Eigen::Matrix2d::Identity() + weight * support * shape;
      proof_step = std::max(proof_step, std::abs(contract(d, step) - (term1 + term2)));

      lhs[q] = l * n.area;
      t1[q] = term1 * n.area;
      t2[q] = term2 * n.area;
      abs1[q] = std::abs(t1[q]);
      abs2[q] = std::abs(t2[q]);
    }

    IdentityReport r;
    r.id = id;
    r.lhs = integrate_nodes(lhs, rule);
    const double i1 = integrate_nodes(t1, rule);
    const double i2 = integrate_nodes(t2, rule);
    r.rhs = -(i1 + i2);
    r.rhs_proof = i1 + i2;
    r.rhs_statement = i1 - i2;
    r.scale = integrate_nodes(abs1, rule) + integrate_nodes(abs2, rule);
    const double denom = r.scale > 0.0 ? r.scale : 1.0;
    r.residual_rel = std::abs(r.lhs - r.rhs) / denom;
    r.residual_proof = std::abs(r.lhs - r.rhs_proof) / denom;
    r.residual_statement = std::abs(r.lhs - r.rhs_statement) / denom;
    r.pointwise_max = pointwise;
    r.proof_step_max = proof_step;
    std::ostringstream os;
    os << "asserted rhs = -(term1 + term2); proof-step sign residual " << r.residual_proof
       << ", statement sign residual " << r.residual_statement;
    r.sign_note = os.str();
    r.pass = r.residual_rel <= tol;
    suite.identities[k] = r;
  }
  return suite;
}

TildeSymmetryReport verify_tilde_symmetry(const IsometricPair& pair, const QuadratureRule& rule, double tol) {
  return verify_tilde_symmetry(evaluate_pair(pair, rule), rule, tol);
}

TildeSymmetryReport verify_tilde_symmetry(const std::vector<PairNode>& nodes, const QuadratureRule& rule,
                                          double tol) {
  std::vector<double> a(nodes.size()), c(nodes.size()), abs_a(nodes.size()), abs_c(nodes.size());
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const PairNode& n = nodes[q];
    const Eigen::Matrix2d d = dsigma2(n.geo.W);
    c[q] = n.phi_p * contract(d, n.hess_phi_t) * n.area;
    a[q] = n.phi_t_p * contract(d, n.geo.hess_phi) * n.area;
    abs_a[q] = std::abs(a[q]);
    abs_c[q] = std::abs(c[q]);
  }
  TildeSymmetryReport r;
  r.with_tilde_hessian = integrate_nodes(c, rule);
  r.with_hessian = integrate_nodes(a, rule);
  r.scale = integrate_nodes(abs_a, rule) + integrate_nodes(abs_c, rule);
  r.residual_rel = std::abs(r.with_tilde_hessian - r.with_hessian) / (r.scale > 0.0 ? r.scale : 1.0);
  r.pass = r.residual_rel <= tol;
  return r;
}

std::string_view to_string(RigidityVerdict v) {
  switch (v) {
    case RigidityVerdict::Rigid: return "Rigid";
    case RigidityVerdict::NonRigid: return "NonRigid";
    case RigidityVerdict::NotIsometric: return "NotIsometric";
    case RigidityVerdict::GateFailed: return "GateFailed";
  }
  return "?";
}

RigidityReport rigidity_experiment(const IsometricPair& pair, const QuadratureRule& rule,
                                   const RigidityTolerances& tol) {
  const std::vector<PairNode> nodes = evaluate_pair(pair, rule);
  RigidityReport r;
  r.gate_M = summarize_gate(geometries(nodes, false));
  r.gate_Mt = summarize_gate(geometries(nodes, true));

  r.min_height = std::numeric_limits<double>::infinity();
  for (const auto& n : nodes) r.min_height = std::min({r.min_height, n.geo.height, n.geo_t.height});

  std::vector<double> integrand(nodes.size()), area(nodes.size());
  r.sign_factor_min = std::numeric_limits<double>::infinity();
  r.gap_max = -std::numeric_limits<double>::infinity();
  r.gap_min = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const PairNode& n = nodes[q];
    const double factor = n.phi_t_p * n.geo.support + n.phi_p * n.geo_t.support;
    const double gap = polarized(n.geo.W, n.Wt) - sigma2_of(n.geo.W);
    integrand[q] = factor * -gap * n.area;
    area[q] = n.area;
    r.sign_factor_min = std::min(r.sign_factor_min, -factor);
    r.gap_max = std::max(r.gap_max, gap);
    r.gap_min = std::min(r.gap_min, gap);
    r.max_W_mismatch = std::max(r.max_W_mismatch, (n.geo.W - n.Wt).norm());
    r.metric_mismatch = std::max(r.metric_mismatch, n.metric_mismatch);
  }
  r.integral_value = integrate_nodes(integrand, rule);
  r.area = integrate_nodes(area, rule);
  r.integral_rel = std::abs(r.integral_value) / r.area;

  std::ostringstream os;
  if (!(r.min_height > 0.0)) {
    r.verdict = RigidityVerdict::GateFailed;
    os << "surface leaves the region rho > 0 (min height " << r.min_height << ")";
  } else if (!r.gate_M.passed || !r.gate_Mt.passed) {
    r.verdict = RigidityVerdict::GateFailed;
    os << "curvature gate failed (min sigma2 on M " << r.gate_M.min_sigma2 << ", on Mt " << r.gate_Mt.min_sigma2
       << ")";
  } else if (r.metric_mismatch > tol.metric) {
    r.verdict = RigidityVerdict::NotIsometric;
    os << "pulled-back metric differs by " << r.metric_mismatch;
  } else if (r.integral_rel <= tol.integral_rel && r.max_W_mismatch <= tol.w_mismatch) {
    r.verdict = RigidityVerdict::Rigid;
    os << "W = W~ at every node";
  } else {
    r.verdict = RigidityVerdict::NonRigid;
    os << "isometric but W differs by " << r.max_W_mismatch;
  }
  r.reason = os.str();
  return r;
}

}  // namespace dsrig
