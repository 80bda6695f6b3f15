#include "dsrig/ambient.hpp"

#include "dsrig/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dsrig {

Eigen::Vector3d omega_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

DeSitterPoint DeSitterPoint::from_chart(double rho, double theta, double phi) {
  return DeSitterPoint{rho, omega_from_angles(theta, phi)};
}

double DeSitterPoint::theta() const {
  return std::atan2(std::hypot(omega.x(), omega.y()), omega.z());
}

double DeSitterPoint::phi() const {
  double p = std::atan2(omega.y(), omega.x());
  if (p < 0.0) p += 2.0 * std::numbers::pi;
  return p;
}

const Eigen::Matrix4d& minkowski_eta() {
  static const Eigen::Matrix4d eta = Eigen::Vector4d(-1.0, 1.0, 1.0, 1.0).asDiagonal();
  return eta;
}

double minkowski_dot(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
  return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2) + a(3) * b(3);
}

Eigen::Vector4d embed(const DeSitterPoint& p) {
  Eigen::Vector4d x;
  x(0) = std::sinh(p.rho);
  x.tail<3>() = std::cosh(p.rho) * p.omega;
  return x;
}

DeSitterPoint unembed(const Eigen::Vector4d& x) {
  const double shell = minkowski_dot(x, x);
  if (std::abs(shell - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "point is off the pseudosphere: <x,x> = " << shell;
    throw OffShell(os.str());
  }
  const double r = x.tail<3>().norm();
  if (r < 1e-12) throw PolarDegeneracy("spatial part of the embedding vanishes");
  return DeSitterPoint{std::asinh(x(0)), x.tail<3>() / r};
}

AmbientMetricJet metric_jet(double rho, double theta) {
  if (std::abs(theta) < kChartPoleTol || std::abs(theta - std::numbers::pi) < kChartPoleTol) {
    std::ostringstream os;
    os << "theta = " << theta << " is at a chart pole";
    throw ChartPole(os.str());
  }
  const double c = std::cosh(rho), sh = std::sinh(rho), th = std::tanh(rho);
  const double s = std::sin(theta), ct = std::cos(theta);

  AmbientMetricJet j;
  j.g_bar = Eigen::Vector3d(-1.0, c * c, c * c * s * s).asDiagonal();
  for (auto& m : j.christoffel) m.setZero();
  // rho = 0, theta = 1, phi = 2
  j.christoffel[0](1, 1) = c * sh;
  j.christoffel[0](2, 2) = c * sh * s * s;
  j.christoffel[1](0, 1) = j.christoffel[1](1, 0) = th;
  j.christoffel[1](2, 2) = -s * ct;
  j.christoffel[2](0, 2) = j.christoffel[2](2, 0) = th;
  j.christoffel[2](1, 2) = j.christoffel[2](2, 1) = ct / s;
  return j;
}

AmbientMetricJet metric_jet(const DeSitterPoint& p) { return metric_jet(p.rho, p.theta()); }

ChartVector conformal_field(double rho) { return {polar::phi(rho), 0.0, 0.0}; }

double lie_derivative_residual(const DeSitterPoint& p, const ChartVector& e_i, const ChartVector& e_j) {
  const auto jet = metric_jet(p);
  const ChartVector v = conformal_field(p.rho);
  // (dV)^a_b = d_b V^a + Gamma^a_{bc} V^c
  Eigen::Matrix3d dv = Eigen::Matrix3d::Zero();
  dv(0, 0) = polar::phi_prime(p.rho);
  for (int a = 0; a < 3; ++a) dv.row(a) += (jet.christoffel[a] * v).transpose();
  const ChartVector di = dv * e_i;
  const ChartVector dj = dv * e_j;
  const auto& g = jet.g_bar;
  return di.dot(g * e_j) + dj.dot(g * e_i) - 2.0 * polar::phi_prime(p.rho) * e_i.dot(g * e_j);
}

CriticalPointContraction critical_point_contraction(double rho) {
  const auto jet = metric_jet(rho, std::numbers::pi / 2);
  // At a critical point of the height the induced metric is cosh^2(rho) sigma.
  const Eigen::Matrix2d g = jet.g_bar.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d gamma0 = jet.christoffel[0].bottomRightCorner<2, 2>();
  const Eigen::Matrix2d contraction = g.inverse() * gamma0;
  return {contraction(0, 0), std::cosh(rho) * std::sinh(rho)};
}

std::string_view to_string(IsometryKind kind) {
  switch (kind) {
    case IsometryKind::Identity: return "Identity";
    case IsometryKind::Rotation: return "Rotation";
    case IsometryKind::Boost: return "Boost";
    case IsometryKind::EquatorReflection: return "EquatorReflection";
    case IsometryKind::Composite: return "Composite";
  }
  return "Unknown";
}

AmbientIsometry AmbientIsometry::identity() { return {}; }

AmbientIsometry AmbientIsometry::rotation(double angle, const Eigen::Vector3d& axis) {
  Eigen::Matrix4d l = Eigen::Matrix4d::Identity();
  l.bottomRightCorner<3, 3>() = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return {l, IsometryKind::Rotation};
}

AmbientIsometry AmbientIsometry::boost(double rapidity, const Eigen::Vector3d& axis) {
  const Eigen::Vector3d n = axis.normalized();
  const double ch = std::cosh(rapidity), sh = std::sinh(rapidity);
  Eigen::Matrix4d l = Eigen::Matrix4d::Identity();
  l(0, 0) = ch;
  l.block<1, 3>(0, 1) = sh * n.transpose();
  l.block<3, 1>(1, 0) = sh * n;
  l.bottomRightCorner<3, 3>() += (ch - 1.0) * n * n.transpose();
  return {l, IsometryKind::Boost};
}

AmbientIsometry AmbientIsometry::reflect_equator() {
  return {Eigen::Vector4d(-1.0, 1.0, 1.0, 1.0).asDiagonal(), IsometryKind::EquatorReflection};
}

AmbientIsometry AmbientIsometry::from_matrix(const Eigen::Matrix4d& lambda, IsometryKind kind) {
  return {lambda, kind};
}

AmbientIsometry AmbientIsometry::inverse() const {
  // lambda^{-1} = eta lambda^T eta for Lorentz matrices
  const auto& eta = minkowski_eta();
  return {eta * lambda_.transpose() * eta, kind_};
}

AmbientIsometry operator*(const AmbientIsometry& a, const AmbientIsometry& b) {
  IsometryKind k = IsometryKind::Composite;
  if (a.kind_ == IsometryKind::Identity) k = b.kind_;
  if (b.kind_ == IsometryKind::Identity) k = a.kind_;
  return {a.lambda_ * b.lambda_, k};
}

double AmbientIsometry::lorentz_defect() const {
  const auto& eta = minkowski_eta();
  return (lambda_.transpose() * eta * lambda_ - eta).cwiseAbs().maxCoeff();
}

DeSitterPoint apply(const AmbientIsometry& iso, const DeSitterPoint& p) {
  return unembed(iso.matrix() * embed(p));
}

}  // namespace dsrig
