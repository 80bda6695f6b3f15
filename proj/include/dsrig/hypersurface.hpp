#pragma once
//
// Pointwise extrinsic and intrinsic geometry of spacelike graphs
// rho = y(theta, phi) in dS^3, and the pointwise lemma checks built on it.
//
// Conventions (fixed once, used everywhere):
//   * nu is the future-directed unit normal (d/drho component > 0);
//   * h_ij = -<D_{X_i} X_j, nu>, so that slices rho = rho0 have W = tanh(rho0) I;
//   * W = g^{-1} h, reported in a g-orthonormal frame (e1 along d/dtheta).
// With these choices Hess^M(Phi) = -(phi' g + h <V, nu>); see check_pre_integral.

#include "dsrig/ambient.hpp"
#include "dsrig/quadrature.hpp"
#include "dsrig/surface.hpp"
#include "dsrig/symfun.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

namespace dsrig {

struct GeometryOptions {
  bool hessian = true;     ///< Hess^M(Phi) via induced Christoffels
  bool curvature = false;  ///< K_norm by differencing the induced connection
};

struct PointGeometry {
  ChartPoint node;
  double height = 0.0;
  Eigen::Vector2d dy = Eigen::Vector2d::Zero();
  double lapse = 1.0;  ///< N = sqrt(1 - |dy|_sigma^2 / cosh^2 y)

  Eigen::Matrix2d g;
  Eigen::Matrix2d g_inv;
  Eigen::Matrix2d h;
  Eigen::Matrix2d W_mixed;  ///< g^{-1} h in chart components
  Eigen::Matrix2d frame;    ///< columns e1, e2 as chart vectors
  Eigen::Matrix2d W;        ///< frame components, symmetrized
  double frame_asymmetry = 0.0;

  Eigen::Vector3d nu;     ///< chart components (rho, theta, phi)
  double support = 0.0;   ///< <V, nu>

  bool has_hessian = false;
  Eigen::Matrix2d hess_phi = Eigen::Matrix2d::Zero();  ///< frame components

  double sigma1 = 0.0;
  double sigma2 = 0.0;
  std::optional<double> K_norm;

  SymOperator W_op() const { return SymOperator(W); }
  /// Chart components of d_i X, i = 0 (theta) or 1 (phi).
  Eigen::Vector3d tangent(int i) const;
};

/// cosh^2(y) - sigma^{ij} y_i y_j; positive exactly where the graph is spacelike.
double spacelike_margin(const Jet2& y, ChartPoint u);

/// Everything in PointGeometry that needs only the height 2-jet (no Hessian,
/// no curvature). Throws NonSpacelike or ChartPole.
PointGeometry geometry_from_jet(const Jet2& y, ChartPoint u);

PointGeometry point_geometry(const GraphSurface& s, ChartPoint u, const GeometryOptions& opts = {});

/// Gamma[k](i, j) = Gamma^k_ij of the induced metric.
std::array<Eigen::Matrix2d, 2> induced_christoffels(const MetricJet& m);

/// Chart components of the covariant Hessian of a function with 2-jet f.
Eigen::Matrix2d surface_hessian(const MetricJet& m, const Jet2& f);

/// Gauss curvature of the induced metric (the normalized scalar curvature
/// for n = 2), from a 4th-order difference of the induced connection.
double gauss_curvature(const GraphSurface& s, ChartPoint u);

/// Residuals (max-norm, frame components) of the two readings of the
/// Hessian identity for Phi = sinh(rho):
///   resolved: Hess(Phi) + phi' g + h <V, nu>
///   stated:   Hess(Phi) - phi' g - h <V, nu>
struct PreIntegralCheck {
  double resolved = 0.0;
  double stated = 0.0;
};
PreIntegralCheck check_pre_integral(const GraphSurface& s, ChartPoint u);

/// Gauss relation sigma_2(W) = C(n,2) (Kbar - K_norm) with Kbar = 1; the
/// opposite sign is reported as `residual_as_stated`.
struct Sigma2CurvatureCheck {
  double sigma2 = 0.0;
  double K_norm = 0.0;
  double residual = 0.0;
  double residual_as_stated = 0.0;
};
Sigma2CurvatureCheck check_sigma2_curvature(const GraphSurface& s, ChartPoint u);

/// |div(sigma_1(W) Id - W)|_g, covariant divergence in chart components.
double newton_divergence(const GraphSurface& s, ChartPoint u);

inline constexpr double kGateSigma2Min = 1e-10;

struct GateReport {
  bool passed = false;          ///< sigma_2 > 1e-10 everywhere and one cone label
  double min_sigma2 = 0.0;
  ConeLabel label = ConeLabel::Outside;  ///< label at the first node
  bool labels_uniform = true;
  std::size_t nodes = 0;
  ChartPoint worst;             ///< node attaining min_sigma2
};

GateReport summarize_gate(const std::vector<PointGeometry>& pts);
GateReport curvature_gate(const GraphSurface& s, const std::vector<ChartPoint>& nodes);
GateReport curvature_gate(const GraphSurface& s, const QuadratureRule& rule);

/// y -> -y, realized by the backend's own reflection.
GraphSurface reflect_surface(const GraphSurface& s);

/// Point map between the charts of M and Mt.
class Correspondence {
 public:
  enum class Kind { ChartIdentity, Ambient };

  struct Image {
    ChartPoint target;
    Eigen::Matrix2d jacobian = Eigen::Matrix2d::Identity();  ///< d target / d u
    Jet2 tilde_height;  ///< height of the image point, as a jet on M's chart
  };

  static Correspondence chart_identity();
  static Correspondence ambient(GraphSurface source, AmbientIsometry iso);

  Kind kind() const { return kind_; }
  const AmbientIsometry& isometry() const { return iso_; }

  Image map(ChartPoint u, const GraphSurface& mt) const;

 private:
  Correspondence() = default;
  Kind kind_ = Kind::ChartIdentity;
  std::optional<GraphSurface> source_;
  AmbientIsometry iso_;
};

struct IsometricPair {
  GraphSurface M;
  GraphSurface Mt;
  AmbientIsometry iso;
  Correspondence correspondence;

  /// Mt = iso(M) with the correspondence f = iso restricted to M.
  static IsometricPair ambient(const GraphSurface& m, const AmbientIsometry& iso);
  /// Two graphs matched by equal chart coordinates (no isometry implied).
  static IsometricPair chart_identity(const GraphSurface& m, const GraphSurface& mt);
};

struct TransformResult {
  GraphSurface surface;                  ///< exact image (Transformed backend)
  std::optional<GraphSurface> regraphed; ///< SampledGrid copy, if requested
  Correspondence correspondence;
};

/// Image of s under iso, regraphed over S^2. Throws NotAGraph when some
/// radial line meets the image other than once, and NonSpacelike when the
/// regraphed samples violate the gradient bound.
TransformResult transform_surface(const GraphSurface& s, const AmbientIsometry& iso,
                                  std::optional<std::pair<int, int>> regraph_grid = std::nullopt);

}  // namespace dsrig
