#pragma once
//
// Height fields of spacelike graphs rho = y(theta, phi) over S^2 and the
// backends that provide their second-order jets:
//
//   Analytic     closed-form descriptor, jets by forward-mode AD
//   SampledGrid  samples on a (theta, phi) grid, jets by central differences
//   Transformed  the image of another surface under an ambient isometry,
//                jets by implicit differentiation through the Lorentz map
//
// A GraphSurface is an immutable, cheaply copyable handle to one of these.

#include "dsrig/ambient.hpp"
#include "dsrig/jet.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace dsrig {

struct ChartPoint {
  double theta = 0.0;
  double phi = 0.0;
};

enum class Backend { Analytic, SampledGrid, Transformed };
std::string_view to_string(Backend b);

/// epsilon * Re Y_l^m(theta, phi)
struct HarmonicTerm {
  double epsilon = 0.0;
  int l = 0;
  int m = 0;
};

/// y = rho0 + sum_k epsilon_k Re Y_{l_k}^{m_k}.
struct AnalyticDescriptor {
  double rho0 = 0.0;
  std::vector<HarmonicTerm> terms;

  static AnalyticDescriptor slice(double rho0) { return {rho0, {}}; }
  static AnalyticDescriptor perturbed_slice(double rho0, double epsilon, int l, int m) {
    return {rho0, {{epsilon, l, m}}};
  }
};

/// Real part of the orthonormal spherical harmonic Y_l^m (Condon-Shortley
/// phase; Re Y_l^{-m} = (-1)^m Re Y_l^m). T is double, Jet1 or Jet2.
template <class T>
T real_spherical_harmonic(int l, int m, const T& theta, const T& phi);

/// A scalar built from the height and chart position, to be differentiated
/// along the surface (e.g. Phi = sinh(y)).
using SurfaceFunction = std::function<Jet2(const Jet2& height, const Jet2& theta, const Jet2& phi)>;

/// Embedding coordinates (x0..x3) of the graph point as jets in (theta, phi).
std::array<Jet2, 4> embed_jet(const Jet2& height, const Jet2& theta, const Jet2& phi);

/// Induced metric g_ij and its first chart derivatives.
struct MetricJet {
  Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
  std::array<Eigen::Matrix2d, 2> dg{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
};

class HeightField {
 public:
  virtual ~HeightField() = default;

  virtual Backend backend() const = 0;
  virtual std::string describe() const = 0;

  virtual double height(ChartPoint u) const { return jet(u).v; }
  /// (y, dy, d^2 y) with respect to (theta, phi).
  virtual Jet2 jet(ChartPoint u) const = 0;
  /// Same as jet(target); `hint` is a nearby point of the defining
  /// parametrization that a backend may use to skip a global search.
  virtual Jet2 jet_near(ChartPoint target, ChartPoint hint) const {
    (void)hint;
    return jet(target);
  }

  /// 2-jet of f(y, theta, phi) along the surface.
  virtual Jet2 field_jet(ChartPoint u, const SurfaceFunction& f) const;
  virtual MetricJet metric_jet(ChartPoint u) const;

  /// Step (dtheta, dphi) used for neighbour differences of derived fields.
  virtual Eigen::Vector2d fd_step() const = 0;

  /// Height field of the equator reflection y -> -y.
  virtual std::shared_ptr<const HeightField> reflected() const = 0;
};

/// Grid theta_i = i pi / n_theta (i = 0..n_theta), phi_j = 2 pi j / n_phi, n_phi even
/// (stencils cross the poles through phi + pi).
struct SampledGrid {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> samples;  ///< (n_theta + 1) * n_phi values, theta-major

  double theta(int i) const;
  double phi(int j) const;
  double at(int i, int j) const;
  void validate() const;
};

class GraphSurface {
 public:
  explicit GraphSurface(std::shared_ptr<const HeightField> field);

  static GraphSurface analytic(const AnalyticDescriptor& desc);
  static GraphSurface sampled(SampledGrid grid);

  Backend backend() const { return field_->backend(); }
  std::string describe() const { return field_->describe(); }
  const HeightField& field() const { return *field_; }
  std::shared_ptr<const HeightField> field_ptr() const { return field_; }

  double height(ChartPoint u) const { return field_->height(u); }
  Jet2 jet(ChartPoint u) const { return field_->jet(u); }
  Jet2 jet_near(ChartPoint target, ChartPoint hint) const { return field_->jet_near(target, hint); }
  Jet2 field_jet(ChartPoint u, const SurfaceFunction& f) const { return field_->field_jet(u, f); }
  MetricJet metric_jet(ChartPoint u) const { return field_->metric_jet(u); }
  Eigen::Vector2d fd_step() const { return field_->fd_step(); }

  /// Samples the height on a grid (including the poles).
  SampledGrid sample(int n_theta, int n_phi) const;

 private:
  std::shared_ptr<const HeightField> field_;
};

/// Forward image of a graph point under an ambient isometry, with jets.
struct ChartImage {
  ChartPoint target;
  Jet2 rho;                    ///< image height as a jet in the source chart
  Eigen::Matrix2d jacobian;    ///< d(theta~, phi~)/d(theta, phi)
  std::array<Jet2, 2> angles;  ///< (theta~, phi~) as jets in the source chart
};

ChartImage image_under(const GraphSurface& source, const AmbientIsometry& iso, ChartPoint u);

/// Height field of iso(source), regraphed over S^2.
class TransformedHeight final : public HeightField {
 public:
  static constexpr double kRhoMax = 3.0;
  static constexpr int kScanIntervals = 120;

  TransformedHeight(GraphSurface source, AmbientIsometry iso);

  Backend backend() const override { return Backend::Transformed; }
  std::string describe() const override;
  double height(ChartPoint target) const override;
  Jet2 jet(ChartPoint target) const override;
  Jet2 jet_near(ChartPoint target, ChartPoint hint) const override;
  Eigen::Vector2d fd_step() const override { return source_.fd_step(); }
  std::shared_ptr<const HeightField> reflected() const override;

  const GraphSurface& source() const { return source_; }
  const AmbientIsometry& isometry() const { return iso_; }

  /// Source chart point mapped onto the radial line through `target`.
  /// Throws NotAGraph unless that line meets the image exactly once in
  /// [-3, 3]; the root is bracketed and bisected to 1e-12 in rho.
  ChartPoint preimage(ChartPoint target) const;

 private:
  double radial_root(ChartPoint target, ChartPoint* pre) const;
  ChartPoint polish(ChartPoint target, ChartPoint u) const;
  Jet2 height_jet_from(ChartPoint u) const;

  GraphSurface source_;
  AmbientIsometry iso_;
  AmbientIsometry inverse_;
};

/// Difference of two azimuths mapped into (-pi, pi].
double wrap_angle(double dphi);

template <class T>
T real_spherical_harmonic(int l, int m, const T& theta, const T& phi) {
  using std::cos;
  using std::sin;
  const int am = m < 0 ? -m : m;
  if (am > l) return T(0.0);
  const T x = cos(theta);
  const T s = sin(theta);
  // Associated Legendre P_l^{|m|}(cos theta) by upward recurrence in l.
  T pmm(1.0);
  for (int i = 1; i <= am; ++i) pmm = -(2.0 * i - 1.0) * (pmm * s);
  T p = pmm;
  if (l > am) {
    T pm1 = (2.0 * am + 1.0) * (x * pmm);
    T pm0 = pmm;
    for (int ll = am + 2; ll <= l; ++ll) {
      const T next = (1.0 / (ll - am)) * ((2.0 * ll - 1.0) * (x * pm1) - (ll + am - 1.0) * pm0);
      pm0 = pm1;
      pm1 = next;
    }
    p = pm1;
  }
  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) *
                                std::exp(std::lgamma(l - am + 1.0) - std::lgamma(l + am + 1.0)));
  const double sign = (m < 0 && (am % 2 == 1)) ? -1.0 : 1.0;
  return (sign * norm) * (p * cos(static_cast<double>(am) * phi));
}

}  // namespace dsrig
