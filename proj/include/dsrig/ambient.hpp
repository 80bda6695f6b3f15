#pragma once
//
// De Sitter space dS^3 in two pictures:
//   * the chart (rho, theta, phi) with metric -drho^2 + cosh^2(rho) (dtheta^2 + sin^2(theta) dphi^2);
//   * the pseudosphere <x, x> = 1 in Minkowski space R^{1,3}, eta = diag(-1, 1, 1, 1).
// Isometries live in the pseudosphere picture as Lorentz matrices; chart
// actions always go through embed/unembed.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string_view>

namespace dsrig {

/// Chart vector components in the order (rho, theta, phi).
using ChartVector = Eigen::Vector3d;

struct DeSitterPoint {
  double rho = 0.0;
  Eigen::Vector3d omega = Eigen::Vector3d::UnitX();  ///< unit vector in R^3

  static DeSitterPoint from_chart(double rho, double theta, double phi);
  double theta() const;
  double phi() const;  ///< in [0, 2 pi)
};

Eigen::Vector3d omega_from_angles(double theta, double phi);

/// Minkowski product with eta = diag(-1, 1, 1, 1).
double minkowski_dot(const Eigen::Vector4d& a, const Eigen::Vector4d& b);
const Eigen::Matrix4d& minkowski_eta();

/// x = (sinh rho, cosh rho * omega).
Eigen::Vector4d embed(const DeSitterPoint& p);

/// Inverse of embed. Throws OffShell if |<x,x> - 1| > 1e-9 and
/// PolarDegeneracy if the spatial part is shorter than 1e-12.
DeSitterPoint unembed(const Eigen::Vector4d& x);

/// Metric and Levi-Civita connection of the chart at a point.
struct AmbientMetricJet {
  Eigen::Matrix3d g_bar;
  /// christoffel[a](b, c) = Gamma^a_{bc}
  std::array<Eigen::Matrix3d, 3> christoffel;
};

inline constexpr double kChartPoleTol = 1e-6;

/// Throws ChartPole when theta is within 1e-6 of 0 or pi.
AmbientMetricJet metric_jet(double rho, double theta);
AmbientMetricJet metric_jet(const DeSitterPoint& p);

/// Polar potential and its generating function along rho.
namespace polar {
inline double phi(double rho) { return std::cosh(rho); }
inline double phi_prime(double rho) { return std::sinh(rho); }
inline double Phi(double rho) { return std::sinh(rho); }
inline double Phi_prime(double rho) { return std::cosh(rho); }
}  // namespace polar

/// V = cosh(rho) d/drho in chart components.
ChartVector conformal_field(double rho);

/// <D_{e_i} V, e_j> + <D_{e_j} V, e_i> - 2 phi'(rho) <e_i, e_j>, evaluated
/// from the chart Christoffel symbols. Vanishes identically.
double lie_derivative_residual(const DeSitterPoint& p, const ChartVector& e_i, const ChartVector& e_j);

/// At a critical point of a graph height, g^{ik} Gamma^rho_{kj} = c(rho) delta^i_j.
/// `from_metric` is the value computed from the chart connection; `as_stated`
/// is cosh(rho) sinh(rho), the value quoted for the same contraction in the
/// source derivation. Both are odd in rho.
struct CriticalPointContraction {
  double from_metric = 0.0;
  double as_stated = 0.0;
};
CriticalPointContraction critical_point_contraction(double rho);

enum class IsometryKind { Identity, Rotation, Boost, EquatorReflection, Composite };
std::string_view to_string(IsometryKind kind);

class AmbientIsometry {
 public:
  AmbientIsometry() = default;

  static AmbientIsometry identity();
  static AmbientIsometry rotation(double angle, const Eigen::Vector3d& axis);
  /// Boost with the given rapidity along a unit spatial axis.
  static AmbientIsometry boost(double rapidity, const Eigen::Vector3d& axis);
  /// rho -> -rho, i.e. lambda = diag(-1, 1, 1, 1).
  static AmbientIsometry reflect_equator();
  static AmbientIsometry from_matrix(const Eigen::Matrix4d& lambda, IsometryKind kind = IsometryKind::Composite);

  const Eigen::Matrix4d& matrix() const { return lambda_; }
  IsometryKind kind() const { return kind_; }

  AmbientIsometry inverse() const;
  /// (a * b)(x) = a(b(x))
  friend AmbientIsometry operator*(const AmbientIsometry& a, const AmbientIsometry& b);

  /// max |lambda^T eta lambda - eta|
  double lorentz_defect() const;
  /// lambda_00 > 0: preserves the time orientation.
  bool orthochronous() const { return lambda_(0, 0) > 0.0; }

 private:
  AmbientIsometry(const Eigen::Matrix4d& l, IsometryKind k) : lambda_(l), kind_(k) {}
  Eigen::Matrix4d lambda_ = Eigen::Matrix4d::Identity();
  IsometryKind kind_ = IsometryKind::Identity;
};

/// unembed(lambda * embed(p)); throws PolarDegeneracy if the image has no chart.
DeSitterPoint apply(const AmbientIsometry& iso, const DeSitterPoint& p);

}  // namespace dsrig
