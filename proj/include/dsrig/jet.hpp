#pragma once
//
// Forward-mode automatic differentiation in two variables.
//
// Jet<2> carries a value, its gradient and its Hessian; Jet<1> drops the
// Hessian. The two chart variables are always (theta, phi) for surfaces.

#include <Eigen/Dense>

#include <cmath>

namespace dsrig {

template <int Order>
struct Jet {
  static_assert(Order == 1 || Order == 2);

  double v = 0.0;
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  Eigen::Matrix2d dd = Eigen::Matrix2d::Zero();  // unused for Order == 1

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly
  Jet(double value, const Eigen::Vector2d& grad) : v(value), d(grad) {}
  Jet(double value, const Eigen::Vector2d& grad, const Eigen::Matrix2d& hess)
      : v(value), d(grad), dd(hess) {}

  /// The independent variable number `index` (0 or 1) at `value`.
  static Jet variable(double value, int index) {
    Jet j(value);
    j.d(index) = 1.0;
    return j;
  }
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;

namespace jet_detail {

// f(u) with f0 = f(u.v), f1 = f'(u.v), f2 = f''(u.v).
template <int O>
Jet<O> chain(const Jet<O>& u, double f0, double f1, double f2) {
  Jet<O> r(f0, f1 * u.d);
  if constexpr (O == 2) r.dd = f1 * u.dd + f2 * u.d * u.d.transpose();
  return r;
}

// f(a, b) from its value and partial derivatives up to second order.
template <int O>
Jet<O> chain2(const Jet<O>& a, const Jet<O>& b, double f, double fa, double fb, double faa,
              double fab, double fbb) {
  Jet<O> r(f, fa * a.d + fb * b.d);
  if constexpr (O == 2) {
    r.dd = fa * a.dd + fb * b.dd + faa * a.d * a.d.transpose() + fbb * b.d * b.d.transpose() +
           fab * (a.d * b.d.transpose() + b.d * a.d.transpose());
  }
  return r;
}

}  // namespace jet_detail

template <int O>
Jet<O> operator+(const Jet<O>& a, const Jet<O>& b) {
  return Jet<O>(a.v + b.v, a.d + b.d, a.dd + b.dd);
}
template <int O>
Jet<O> operator-(const Jet<O>& a, const Jet<O>& b) {
  return Jet<O>(a.v - b.v, a.d - b.d, a.dd - b.dd);
}
template <int O>
Jet<O> operator-(const Jet<O>& a) {
  return Jet<O>(-a.v, -a.d, -a.dd);
}
template <int O>
Jet<O> operator*(const Jet<O>& a, const Jet<O>& b) {
  return jet_detail::chain2(a, b, a.v * b.v, b.v, a.v, 0.0, 1.0, 0.0);
}
template <int O>
Jet<O> operator/(const Jet<O>& a, const Jet<O>& b) {
  const double ib = 1.0 / b.v;
  return jet_detail::chain2(a, b, a.v * ib, ib, -a.v * ib * ib, 0.0, -ib * ib, 2.0 * a.v * ib * ib * ib);
}
template <int O>
Jet<O> operator*(double s, const Jet<O>& a) {
  return Jet<O>(s * a.v, s * a.d, s * a.dd);
}
template <int O>
Jet<O> operator*(const Jet<O>& a, double s) {
  return s * a;
}
template <int O>
Jet<O> operator+(const Jet<O>& a, double s) {
  return Jet<O>(a.v + s, a.d, a.dd);
}
template <int O>
Jet<O> operator+(double s, const Jet<O>& a) {
  return a + s;
}
template <int O>
Jet<O> operator-(const Jet<O>& a, double s) {
  return Jet<O>(a.v - s, a.d, a.dd);
}
template <int O>
Jet<O> operator-(double s, const Jet<O>& a) {
  return Jet<O>(s - a.v, -a.d, -a.dd);
}

template <int O>
Jet<O> sin(const Jet<O>& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return jet_detail::chain(u, s, c, -s);
}
template <int O>
Jet<O> cos(const Jet<O>& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return jet_detail::chain(u, c, -s, -c);
}
template <int O>
Jet<O> sinh(const Jet<O>& u) {
  const double s = std::sinh(u.v), c = std::cosh(u.v);
  return jet_detail::chain(u, s, c, s);
}
template <int O>
Jet<O> cosh(const Jet<O>& u) {
  const double s = std::sinh(u.v), c = std::cosh(u.v);
  return jet_detail::chain(u, c, s, c);
}
template <int O>
Jet<O> sqrt(const Jet<O>& u) {
  const double r = std::sqrt(u.v);
  return jet_detail::chain(u, r, 0.5 / r, -0.25 / (r * u.v));
}
template <int O>
Jet<O> asinh(const Jet<O>& u) {
  const double q = 1.0 + u.v * u.v;
  const double sq = std::sqrt(q);
  return jet_detail::chain(u, std::asinh(u.v), 1.0 / sq, -u.v / (q * sq));
}
template <int O>
Jet<O> atan2(const Jet<O>& y, const Jet<O>& x) {
  const double r2 = x.v * x.v + y.v * y.v;
  const double r4 = r2 * r2;
  return jet_detail::chain2(y, x, std::atan2(y.v, x.v), x.v / r2, -y.v / r2, -2.0 * x.v * y.v / r4,
                            (y.v * y.v - x.v * x.v) / r4, 2.0 * x.v * y.v / r4);
}

/// Drops the Hessian of a second-order jet.
inline Jet1 truncate(const Jet2& j) { return Jet1(j.v, j.d); }

}  // namespace dsrig
