#include "dsrig/surface.hpp"

#include "dsrig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dsrig {

namespace {

constexpr double kPi = std::numbers::pi;

template <int O>
std::array<Jet<O>, 3> induced_metric_entries(const Jet<O>& y, const Jet<O>& y_t, const Jet<O>& y_p,
                                             const Jet<O>& theta) {
  const Jet<O> c = cosh(y);
  const Jet<O> s = sin(theta);
  const Jet<O> c2 = c * c;
  return {c2 - y_t * y_t, -(y_t * y_p), c2 * (s * s) - y_p * y_p};
}

Eigen::Matrix2d metric_from_jet(const Jet2& y, double theta) {
  const double c = std::cosh(y.v), s = std::sin(theta);
  Eigen::Matrix2d g;
  g(0, 0) = c * c - y.d(0) * y.d(0);
  g(0, 1) = g(1, 0) = -y.d(0) * y.d(1);
  g(1, 1) = c * c * s * s - y.d(1) * y.d(1);
  return g;
}

// --------------------------------------------------------------------------
// Analytic backend

class AnalyticHeight final : public HeightField {
 public:
  explicit AnalyticHeight(AnalyticDescriptor d) : desc_(std::move(d)) {}

  Backend backend() const override { return Backend::Analytic; }

  std::string describe() const override {
    std::ostringstream os;
    os << "analytic rho0=" << desc_.rho0;
    for (const auto& t : desc_.terms) os << " +" << t.epsilon << "*Y(" << t.l << "," << t.m << ")";
    return os.str();
  }

  double height(ChartPoint u) const override {
    double y = desc_.rho0;
    for (const auto& t : desc_.terms) y += t.epsilon * real_spherical_harmonic(t.l, t.m, u.theta, u.phi);
    return y;
  }

  Jet2 jet(ChartPoint u) const override {
    const Jet2 th = Jet2::variable(u.theta, 0);
    const Jet2 ph = Jet2::variable(u.phi, 1);
    Jet2 y(desc_.rho0);
    for (const auto& t : desc_.terms) y = y + t.epsilon * real_spherical_harmonic(t.l, t.m, th, ph);
    return y;
  }

  Eigen::Vector2d fd_step() const override { return {1e-3, 1e-3}; }

  std::shared_ptr<const HeightField> reflected() const override {
    AnalyticDescriptor r = desc_;
    r.rho0 = -r.rho0;
    for (auto& t : r.terms) t.epsilon = -t.epsilon;
    return std::make_shared<AnalyticHeight>(std::move(r));
  }

 private:
  AnalyticDescriptor desc_;
};

// --------------------------------------------------------------------------
// Sampled grid backend

class SampledHeight final : public HeightField {
 public:
  explicit SampledHeight(SampledGrid g) : grid_(std::move(g)) {
    grid_.validate();
    h_theta_ = kPi / grid_.n_theta;
    h_phi_ = 2.0 * kPi / grid_.n_phi;
    nodal_.resize(grid_.samples.size());
    for (int i = 0; i <= grid_.n_theta; ++i) {
      for (int j = 0; j < grid_.n_phi; ++j) nodal_[index(i, j)] = nodal_jet(i, j);
    }
  }

  Backend backend() const override { return Backend::SampledGrid; }

  std::string describe() const override {
    std::ostringstream os;
    os << "sampled " << grid_.n_theta << "x" << grid_.n_phi;
    return os.str();
  }

  double height(ChartPoint u) const override {
    canonical(u);
    if (auto n = node_of(u)) return grid_.at(n->first, n->second);
    return interpolate(u).v;
  }

  Jet2 jet(ChartPoint u) const override {
    const bool flipped = canonical(u);
    Jet2 r;
    if (auto n = node_of(u)) {
      r = nodal_[index(n->first, n->second)];
    } else {
      r = interpolate(u);
    }
    if (flipped) {
      r.d(0) = -r.d(0);
      r.dd(0, 1) = r.dd(1, 0) = -r.dd(0, 1);
    }
    return r;
  }

  Jet2 field_jet(ChartPoint u, const SurfaceFunction& f) const override {
    const auto value = [&](double dt, double dp) {
      const ChartPoint q{u.theta + dt, u.phi + dp};
      return f(Jet2(height(q)), Jet2(q.theta), Jet2(q.phi)).v;
    };
    const double ht = h_theta_, hp = h_phi_;
    const double f0 = value(0, 0);
    const double ftp = value(ht, 0), ftm = value(-ht, 0);
    const double fpp = value(0, hp), fpm = value(0, -hp);
    Jet2 r(f0);
    r.d << (ftp - ftm) / (2 * ht), (fpp - fpm) / (2 * hp);
    r.dd(0, 0) = (ftp - 2 * f0 + ftm) / (ht * ht);
    r.dd(1, 1) = (fpp - 2 * f0 + fpm) / (hp * hp);
    r.dd(0, 1) = r.dd(1, 0) =
        (value(ht, hp) - value(ht, -hp) - value(-ht, hp) + value(-ht, -hp)) / (4 * ht * hp);
    return r;
  }

  MetricJet metric_jet(ChartPoint u) const override {
    const auto g_at = [&](double dt, double dp) {
      const ChartPoint q{u.theta + dt, u.phi + dp};
      return metric_from_jet(jet(q), q.theta);
    };
    MetricJet m;
    m.g = g_at(0, 0);
    m.dg[0] = (g_at(h_theta_, 0) - g_at(-h_theta_, 0)) / (2 * h_theta_);
    m.dg[1] = (g_at(0, h_phi_) - g_at(0, -h_phi_)) / (2 * h_phi_);
    return m;
  }

  Eigen::Vector2d fd_step() const override { return {h_theta_, h_phi_}; }

  std::shared_ptr<const HeightField> reflected() const override {
    SampledGrid r = grid_;
    for (auto& v : r.samples) v = -v;
    return std::make_shared<SampledHeight>(std::move(r));
  }

 private:
  // (theta, phi) and (-theta, phi + pi) name the same point of S^2; folds
  // theta into [0, pi] and reports whether d/dtheta changed sign.
  static bool canonical(ChartPoint& u) {
    bool flipped = false;
    if (u.theta < 0.0) {
      u.theta = -u.theta;
      u.phi += kPi;
      flipped = true;
    } else if (u.theta > kPi) {
      u.theta = 2.0 * kPi - u.theta;
      u.phi += kPi;
      flipped = true;
    }
    u.phi = std::fmod(u.phi, 2.0 * kPi);
    if (u.phi < 0.0) u.phi += 2.0 * kPi;
    return flipped;
  }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * grid_.n_phi + j; }

  int wrap_j(int j) const { return ((j % grid_.n_phi) + grid_.n_phi) % grid_.n_phi; }

  std::optional<std::pair<int, int>> node_of(ChartPoint u) const {
    const double fi = u.theta / h_theta_;
    const double fj = u.phi / h_phi_;
    const double ri = std::round(fi), rj = std::round(fj);
    if (std::abs(fi - ri) > 1e-9 || std::abs(fj - rj) > 1e-9) return std::nullopt;
    const int i = static_cast<int>(ri);
    if (i < 0 || i > grid_.n_theta) return std::nullopt;
    return std::make_pair(i, wrap_j(static_cast<int>(rj)));
  }

  // Rows beyond the poles are read through the fold (theta, phi) ~ (-theta, phi + pi),
  // so every stencil is central.
  double y(int i, int j) const {
    const int nt = grid_.n_theta, half = grid_.n_phi / 2;
    if (i < 0) return grid_.at(-i, wrap_j(j + half));
    if (i > nt) return grid_.at(2 * nt - i, wrap_j(j + half));
    return grid_.at(i, wrap_j(j));
  }

  Jet2 nodal_jet(int i, int j) const {
    const double ht = h_theta_, hp = h_phi_;
    Jet2 r(y(i, j));
    r.d << (y(i + 1, j) - y(i - 1, j)) / (2 * ht), (y(i, j + 1) - y(i, j - 1)) / (2 * hp);
    r.dd(0, 0) = (y(i + 1, j) - 2 * y(i, j) + y(i - 1, j)) / (ht * ht);
    r.dd(1, 1) = (y(i, j + 1) - 2 * y(i, j) + y(i, j - 1)) / (hp * hp);
    r.dd(0, 1) = r.dd(1, 0) =
        (y(i + 1, j + 1) - y(i + 1, j - 1) - y(i - 1, j + 1) + y(i - 1, j - 1)) / (4 * ht * hp);
    return r;
  }

  Jet2 nodal_at(int i, int j) const {
    const int nt = grid_.n_theta, half = grid_.n_phi / 2;
    if (i >= 0 && i <= nt) return nodal_[index(i, wrap_j(j))];
    Jet2 r = nodal_[index(i < 0 ? -i : 2 * nt - i, wrap_j(j + half))];
    r.d(0) = -r.d(0);
    r.dd(0, 1) = r.dd(1, 0) = -r.dd(0, 1);
    return r;
  }

  // Tensor-product cubic Lagrange interpolation of the nodal jets.
  Jet2 interpolate(ChartPoint u) const {
    const double ft = u.theta / h_theta_;
    const double fp = u.phi / h_phi_;
    const int i0 = static_cast<int>(std::floor(ft)) - 1;
    const int j0 = static_cast<int>(std::floor(fp)) - 1;
    const auto weights = [](double x, int base) {
      std::array<double, 4> w{};
      for (int a = 0; a < 4; ++a) {
        double v = 1.0;
        for (int b = 0; b < 4; ++b) {
          if (b != a) v *= (x - (base + b)) / static_cast<double>(a - b);
        }
        w[a] = v;
      }
      return w;
    };
    const auto wt = weights(ft, i0);
    const auto wp = weights(fp, j0);
    Jet2 r(0.0);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) r = r + (wt[a] * wp[b]) * nodal_at(i0 + a, j0 + b);
    }
    return r;
  }

  SampledGrid grid_;
  double h_theta_ = 0.0;
  double h_phi_ = 0.0;
  std::vector<Jet2> nodal_;
};

}  // namespace

std::string_view to_string(Backend b) {
  switch (b) {
    case Backend::Analytic: return "Analytic";
    case Backend::SampledGrid: return "SampledGrid";
    case Backend::Transformed: return "Transformed";
  }
  return "Unknown";
}

double wrap_angle(double dphi) {
  double r = std::remainder(dphi, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

std::array<Jet2, 4> embed_jet(const Jet2& height, const Jet2& theta, const Jet2& phi) {
  const Jet2 c = cosh(height);
  const Jet2 s = sin(theta);
  return {sinh(height), c * (s * cos(phi)), c * (s * sin(phi)), c * cos(theta)};
}

Jet2 HeightField::field_jet(ChartPoint u, const SurfaceFunction& f) const {
  return f(jet(u), Jet2::variable(u.theta, 0), Jet2::variable(u.phi, 1));
}

MetricJet HeightField::metric_jet(ChartPoint u) const {
  const Jet2 y2 = jet(u);
  const Jet1 y = truncate(y2);
  const Jet1 y_t(y2.d(0), y2.dd.row(0).transpose());
  const Jet1 y_p(y2.d(1), y2.dd.row(1).transpose());
  const Jet1 th = Jet1::variable(u.theta, 0);
  const auto e = induced_metric_entries(y, y_t, y_p, th);
  MetricJet m;
  m.g << e[0].v, e[1].v, e[1].v, e[2].v;
  for (int k = 0; k < 2; ++k) m.dg[k] << e[0].d(k), e[1].d(k), e[1].d(k), e[2].d(k);
  return m;
}

double SampledGrid::theta(int i) const { return kPi * i / n_theta; }
double SampledGrid::phi(int j) const { return 2.0 * kPi * j / n_phi; }
double SampledGrid::at(int i, int j) const { return samples[static_cast<std::size_t>(i) * n_phi + j]; }

void SampledGrid::validate() const {
  if (n_theta < 4 || n_phi < 4 || n_phi % 2 != 0) {
    throw ConfigError("sampled grid needs n_theta >= 4 and an even n_phi >= 4");
  }
  if (samples.size() != static_cast<std::size_t>(n_theta + 1) * n_phi) {
    std::ostringstream os;
    os << "sampled grid expects " << (n_theta + 1) * n_phi << " samples, got " << samples.size();
    throw ConfigError(os.str());
  }
  for (double v : samples) {
    if (!std::isfinite(v)) throw ConfigError("sampled grid contains non-finite heights");
  }
}

GraphSurface::GraphSurface(std::shared_ptr<const HeightField> field) : field_(std::move(field)) {}

GraphSurface GraphSurface::analytic(const AnalyticDescriptor& desc) {
  return GraphSurface(std::make_shared<AnalyticHeight>(desc));
}

GraphSurface GraphSurface::sampled(SampledGrid grid) {
  return GraphSurface(std::make_shared<SampledHeight>(std::move(grid)));
}

SampledGrid GraphSurface::sample(int n_theta, int n_phi) const {
  SampledGrid g{n_theta, n_phi, {}};
  g.samples.resize(static_cast<std::size_t>(n_theta + 1) * n_phi);
  for (int i = 0; i <= n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) g.samples[static_cast<std::size_t>(i) * n_phi + j] = height({g.theta(i), g.phi(j)});
  }
  return g;
}

// --------------------------------------------------------------------------
// Transformed backend

ChartImage image_under(const GraphSurface& source, const AmbientIsometry& iso, ChartPoint u) {
  const Jet2 th = Jet2::variable(u.theta, 0);
  const Jet2 ph = Jet2::variable(u.phi, 1);
  const auto x = embed_jet(source.jet(u), th, ph);
  const Eigen::Matrix4d& l = iso.matrix();
  std::array<Jet2, 4> xt;
  for (int a = 0; a < 4; ++a) {
    Jet2 acc(0.0);
    for (int b = 0; b < 4; ++b) {
      if (l(a, b) != 0.0) acc = acc + l(a, b) * x[b];
    }
    xt[a] = acc;
  }
  ChartImage img;
  img.rho = asinh(xt[0]);
  Jet2 theta_t = atan2(sqrt(xt[1] * xt[1] + xt[2] * xt[2]), xt[3]);
  Jet2 phi_t = atan2(xt[2], xt[1]);
  if (phi_t.v < 0.0) phi_t.v += 2.0 * kPi;
  img.angles = {theta_t, phi_t};
  img.target = {theta_t.v, phi_t.v};
  img.jacobian.row(0) = theta_t.d.transpose();
  img.jacobian.row(1) = phi_t.d.transpose();
  return img;
}

TransformedHeight::TransformedHeight(GraphSurface source, AmbientIsometry iso)
    : source_(std::move(source)), iso_(iso), inverse_(iso.inverse()) {}

std::string TransformedHeight::describe() const {
  std::ostringstream os;
  os << "transformed(" << to_string(iso_.kind()) << ") of " << source_.describe();
  return os.str();
}

double TransformedHeight::radial_root(ChartPoint target, ChartPoint* pre) const {
  const Eigen::Vector3d omega = omega_from_angles(target.theta, target.phi);
  const auto residual = [&](double rho, ChartPoint* at) {
    const DeSitterPoint p = unembed(inverse_.matrix() * embed(DeSitterPoint{rho, omega}));
    const ChartPoint c{p.theta(), p.phi()};
    if (at) *at = c;
    return p.rho - source_.height(c);
  };

  const double h = 2.0 * kRhoMax / kScanIntervals;
  int crossings = 0;
  double lo = 0.0, hi = 0.0;
  double prev = residual(-kRhoMax, nullptr);
  for (int k = 1; k <= kScanIntervals; ++k) {
    const double rho = -kRhoMax + k * h;
    const double cur = residual(rho, nullptr);
    if (cur == 0.0 || (prev < 0.0) != (cur < 0.0)) {
      if (prev != 0.0) {
        ++crossings;
        lo = rho - h;
        hi = rho;
      }
    }
    prev = cur;
  }
  if (crossings != 1) {
    std::ostringstream os;
    os << "radial line through (theta=" << target.theta << ", phi=" << target.phi << ") meets the image "
       << crossings << " times in [-" << kRhoMax << ", " << kRhoMax << "]";
    throw NotAGraph(os.str());
  }
  double f_lo = residual(lo, nullptr);
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = residual(mid, nullptr);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double rho = 0.5 * (lo + hi);
  if (pre) residual(rho, pre);
  return rho;
}

ChartPoint TransformedHeight::preimage(ChartPoint target) const {
  ChartPoint pre;
  radial_root(target, &pre);
  return pre;
}

ChartPoint TransformedHeight::polish(ChartPoint target, ChartPoint u) const {
  // Newton on the angular part of the forward map.
  for (int it = 0; it < 8; ++it) {
    const ChartImage img = image_under(source_, iso_, u);
    const Eigen::Vector2d r(img.target.theta - target.theta, wrap_angle(img.target.phi - target.phi));
    if (r.norm() < 1e-15) break;
    const Eigen::Vector2d step = img.jacobian.partialPivLu().solve(r);
    u.theta -= step(0);
    u.phi -= step(1);
  }
  return u;
}

Jet2 TransformedHeight::height_jet_from(ChartPoint u) const {
  // y~ = rho~ o T^{-1}, T = (theta~, phi~): implicit second-order chain rule.
  const ChartImage img = image_under(source_, iso_, u);
  const Eigen::Matrix2d ainv = img.jacobian.inverse();
  Jet2 y(img.rho.v);
  y.d = ainv.transpose() * img.rho.d;
  Eigen::Matrix2d inner = img.rho.dd;
  for (int m = 0; m < 2; ++m) inner -= y.d(m) * img.angles[m].dd;
  y.dd = ainv.transpose() * inner * ainv;
  return y;
}

double TransformedHeight::height(ChartPoint target) const { return radial_root(target, nullptr); }

Jet2 TransformedHeight::jet(ChartPoint target) const {
  return height_jet_from(polish(target, preimage(target)));
}

Jet2 TransformedHeight::jet_near(ChartPoint target, ChartPoint hint) const {
  const ChartPoint u = polish(target, hint);
  const ChartImage img = image_under(source_, iso_, u);
  const double miss = std::hypot(img.target.theta - target.theta, wrap_angle(img.target.phi - target.phi));
  if (miss > 1e-10) return jet(target);
  return height_jet_from(u);
}

std::shared_ptr<const HeightField> TransformedHeight::reflected() const {
  const auto r = AmbientIsometry::reflect_equator();
  return std::make_shared<TransformedHeight>(GraphSurface(source_.field().reflected()), r * iso_ * r);
}

}  // namespace dsrig
