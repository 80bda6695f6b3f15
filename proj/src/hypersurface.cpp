#include "dsrig/hypersurface.hpp"

#include "dsrig/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dsrig {

namespace {

std::string where(ChartPoint u) {
  std::ostringstream os;
  os << "(theta=" << u.theta << ", phi=" << u.phi << ")";
  return os.str();
}

ChartPoint shifted(ChartPoint u, int k, double t) {
  if (k == 0) {
    u.theta += t;
  } else {
    u.phi += t;
  }
  return u;
}

// Fourth-order central difference of a (matrix-valued) function along chart axis k.
template <class F>
auto diff5(const F& f, ChartPoint u, int k, double h) {
  using R = decltype(f(u));
  const R a = f(shifted(u, k, -2 * h));
  const R b = f(shifted(u, k, -h));
  const R c = f(shifted(u, k, h));
  const R d = f(shifted(u, k, 2 * h));
  return R((a - 8.0 * b + 8.0 * c - d) / (12.0 * h));
}

}  // namespace

Eigen::Vector3d PointGeometry::tangent(int i) const {
  return i == 0 ? Eigen::Vector3d(dy(0), 1.0, 0.0) : Eigen::Vector3d(dy(1), 0.0, 1.0);
}

double spacelike_margin(const Jet2& y, ChartPoint u) {
  const double c = std::cosh(y.v), s = std::sin(u.theta);
  return c * c - y.d(0) * y.d(0) - y.d(1) * y.d(1) / (s * s);
}

PointGeometry geometry_from_jet(const Jet2& y, ChartPoint u) {
  const AmbientMetricJet amb = metric_jet(y.v, u.theta);  // ChartPole guard
  const double c = std::cosh(y.v);
  const double s = std::sin(u.theta);
  const double yt = y.d(0), yp = y.d(1);

  const double margin = spacelike_margin(y, u);
  PointGeometry p;
  p.node = u;
  p.height = y.v;
  p.dy = y.d;
  p.g << c * c - yt * yt, -yt * yp, -yt * yp, c * c * s * s - yp * yp;
  const bool positive = p.g(0, 0) > 0.0 && p.g.determinant() > 0.0;
  if (!(margin > 0.0) || !positive) {
    std::ostringstream os;
    os << "graph is not spacelike at " << where(u) << ": cosh^2 y - |dy|^2 = " << margin;
    throw NonSpacelike(os.str());
  }
  p.g_inv = p.g.inverse();
  p.lapse = std::sqrt(margin) / c;
  const double n = p.lapse;
  p.nu = Eigen::Vector3d(1.0 / n, yt / (c * c * n), yp / (c * c * s * s * n));
  const Eigen::Vector3d nu_lower(-1.0 / n, yt / n, yp / n);
  p.support = c * nu_lower(0);

  const std::array<Eigen::Vector3d, 2> x{p.tangent(0), p.tangent(1)};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double acc = nu_lower(0) * y.dd(i, j);
      for (int a = 0; a < 3; ++a) acc += nu_lower(a) * x[i].dot(amb.christoffel[a] * x[j]);
      p.h(i, j) = -acc;
    }
  }
  p.h = 0.5 * (p.h + p.h.transpose()).eval();
  p.W_mixed = p.g_inv * p.h;

  Eigen::Vector2d e1(1.0 / std::sqrt(p.g(0, 0)), 0.0);
  Eigen::Vector2d e2(0.0, 1.0);
  e2 -= e1.dot(p.g * e2) * e1;
  e2 /= std::sqrt(e2.dot(p.g * e2));
  p.frame.col(0) = e1;
  p.frame.col(1) = e2;

  const Eigen::Matrix2d wf = p.frame.transpose() * p.h * p.frame;
  p.frame_asymmetry = std::abs(wf(0, 1) - wf(1, 0));
  p.W = 0.5 * (wf + wf.transpose());
  p.sigma1 = p.W.trace();
  p.sigma2 = sigma2(SymOperator(p.W));
  return p;
}

std::array<Eigen::Matrix2d, 2> induced_christoffels(const MetricJet& m) {
  const Eigen::Matrix2d gi = m.g.inverse();
  std::array<Eigen::Matrix2d, 2> gamma{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        double acc = 0.0;
        for (int l = 0; l < 2; ++l) acc += gi(k, l) * (m.dg[i](l, j) + m.dg[j](l, i) - m.dg[l](i, j));
        gamma[k](i, j) = 0.5 * acc;
      }
    }
  }
  return gamma;
}

Eigen::Matrix2d surface_hessian(const MetricJet& m, const Jet2& f) {
  const auto gamma = induced_christoffels(m);
  Eigen::Matrix2d hess = f.dd;
  for (int k = 0; k < 2; ++k) hess -= f.d(k) * gamma[k];
  return 0.5 * (hess + hess.transpose());
}

double gauss_curvature(const GraphSurface& s, ChartPoint u) {
  const double h = s.fd_step()(0);
  const auto gamma_at = [&](ChartPoint q) {
    const auto g = induced_christoffels(s.metric_jet(q));
    Eigen::Matrix<double, 2, 4> packed;
    packed << g[0], g[1];
    return packed;
  };
  const auto unpack = [](const Eigen::Matrix<double, 2, 4>& p) {
    return std::array<Eigen::Matrix2d, 2>{p.leftCols<2>(), p.rightCols<2>()};
  };
  const MetricJet m = s.metric_jet(u);
  const auto gamma = induced_christoffels(m);
  const auto d0 = unpack(diff5(gamma_at, u, 0, h));
  const auto d1 = unpack(diff5(gamma_at, u, 1, h));

  // R^a_{101} = d_0 G^a_11 - d_1 G^a_01 + G^a_0e G^e_11 - G^a_1e G^e_01
  Eigen::Vector2d r;
  for (int a = 0; a < 2; ++a) {
    double acc = d0[a](1, 1) - d1[a](0, 1);
    for (int e = 0; e < 2; ++e) acc += gamma[a](0, e) * gamma[e](1, 1) - gamma[a](1, e) * gamma[e](0, 1);
    r(a) = acc;
  }
  return m.g.row(0).dot(r) / m.g.determinant();
}

PointGeometry point_geometry(const GraphSurface& s, ChartPoint u, const GeometryOptions& opts) {
  PointGeometry p = geometry_from_jet(s.jet(u), u);
  if (opts.hessian) {
    const Jet2 f = s.field_jet(u, [](const Jet2& y, const Jet2&, const Jet2&) { return sinh(y); });
    p.hess_phi = p.frame.transpose() * surface_hessian(s.metric_jet(u), f) * p.frame;
    p.has_hessian = true;
  }
  if (opts.curvature) p.K_norm = gauss_curvature(s, u);
  return p;
}

PreIntegralCheck check_pre_integral(const GraphSurface& s, ChartPoint u) {
  const PointGeometry p = point_geometry(s, u);
  const Eigen::Matrix2d rhs = polar::phi_prime(p.height) * Eigen::Matrix2d::Identity() + p.support * p.W;
  return {(p.hess_phi + rhs).cwiseAbs().maxCoeff(), (p.hess_phi - rhs).cwiseAbs().maxCoeff()};
}

Sigma2CurvatureCheck check_sigma2_curvature(const GraphSurface& s, ChartPoint u) {
  const PointGeometry p = point_geometry(s, u, {.hessian = false, .curvature = true});
  Sigma2CurvatureCheck c;
  c.sigma2 = p.sigma2;
  c.K_norm = *p.K_norm;
  c.residual = std::abs(c.sigma2 - (1.0 - c.K_norm));
  c.residual_as_stated = std::abs(c.sigma2 - (c.K_norm - 1.0));
  return c;
}

double newton_divergence(const GraphSurface& s, ChartPoint u) {
  const double h = s.fd_step()(0);
  const auto newton = [&](ChartPoint q) -> Eigen::Matrix2d {
    const PointGeometry p = geometry_from_jet(s.jet(q), q);
    return p.W_mixed.trace() * Eigen::Matrix2d::Identity() - p.W_mixed;
  };
  const Eigen::Matrix2d t = newton(u);
  const std::array<Eigen::Matrix2d, 2> dt{diff5(newton, u, 0, h), diff5(newton, u, 1, h)};
  const MetricJet m = s.metric_jet(u);
  const auto gamma = induced_christoffels(m);

  // (div T)_j = d_i T^i_j + G^i_ik T^k_j - G^k_ij T^i_k
  Eigen::Vector2d div = Eigen::Vector2d::Zero();
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      div(j) += dt[i](i, j);
      for (int k = 0; k < 2; ++k) div(j) += gamma[i](i, k) * t(k, j) - gamma[k](i, j) * t(i, k);
    }
  }
  return std::sqrt(std::max(0.0, div.dot(m.g.inverse() * div)));
}

GateReport summarize_gate(const std::vector<PointGeometry>& pts) {
  GateReport r;
  r.nodes = pts.size();
  r.min_sigma2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const ConeLabel label = cone_classify(pts[k].W_op()).label;
    if (k == 0) {
      r.label = label;
    } else if (label != r.label) {
      r.labels_uniform = false;
    }
    if (pts[k].sigma2 < r.min_sigma2) {
      r.min_sigma2 = pts[k].sigma2;
      r.worst = pts[k].node;
    }
  }
  r.passed = !pts.empty() && r.min_sigma2 > kGateSigma2Min && r.labels_uniform;
  return r;
}

GateReport curvature_gate(const GraphSurface& s, const std::vector<ChartPoint>& nodes) {
  std::vector<PointGeometry> pts;
  pts.reserve(nodes.size());
  for (const auto& u : nodes) pts.push_back(point_geometry(s, u, {.hessian = false}));
  return summarize_gate(pts);
}

GateReport curvature_gate(const GraphSurface& s, const QuadratureRule& rule) {
  return curvature_gate(s, rule.nodes);
}

GraphSurface reflect_surface(const GraphSurface& s) { return GraphSurface(s.field().reflected()); }

Correspondence Correspondence::chart_identity() { return Correspondence(); }

Correspondence Correspondence::ambient(GraphSurface source, AmbientIsometry iso) {
  Correspondence c;
  c.kind_ = Kind::Ambient;
  c.source_ = std::move(source);
  c.iso_ = iso;
  return c;
}

Correspondence::Image Correspondence::map(ChartPoint u, const GraphSurface& mt) const {
  Image img;
  if (kind_ == Kind::ChartIdentity) {
    img.target = u;
    img.tilde_height = mt.jet(u);
    return img;
  }
  const ChartImage ci = image_under(*source_, iso_, u);
  img.target = ci.target;
  img.jacobian = ci.jacobian;
  img.tilde_height = ci.rho;
  return img;
}

IsometricPair IsometricPair::ambient(const GraphSurface& m, const AmbientIsometry& iso) {
  auto t = transform_surface(m, iso);
  return {m, t.surface, iso, t.correspondence};
}

IsometricPair IsometricPair::chart_identity(const GraphSurface& m, const GraphSurface& mt) {
  return {m, mt, AmbientIsometry::identity(), Correspondence::chart_identity()};
}

TransformResult transform_surface(const GraphSurface& s, const AmbientIsometry& iso,
                                  std::optional<std::pair<int, int>> regraph_grid) {
  TransformResult r{GraphSurface(std::make_shared<TransformedHeight>(s, iso)), std::nullopt,
                    Correspondence::ambient(s, iso)};
  if (regraph_grid) {
    GraphSurface sampled = GraphSurface::sampled(r.surface.sample(regraph_grid->first, regraph_grid->second));
    const int nt = regraph_grid->first, np = regraph_grid->second;
    for (int i = 1; i < nt; ++i) {
      for (int j = 0; j < np; ++j) {
        const ChartPoint u{std::numbers::pi * i / nt, 2.0 * std::numbers::pi * j / np};
        if (!(spacelike_margin(sampled.jet(u), u) > 0.0)) {
          throw NonSpacelike("regraphed image violates the gradient bound at " + where(u));
        }
      }
    }
    r.regraphed = std::move(sampled);
  }
  return r;
}

}  // namespace dsrig
