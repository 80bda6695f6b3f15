#include "dsrig/jet.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

using namespace dsrig;

namespace {

using Fn = std::function<Jet2(const Jet2&, const Jet2&)>;

double value(const Fn& f, double x, double y) { return f(Jet2(x), Jet2(y)).v; }

// Compares the AD jet with 4th-order central differences of the value.
void expect_matches_fd(const Fn& f, double x, double y) {
  const Jet2 j = f(Jet2::variable(x, 0), Jet2::variable(y, 1));
  const double h = 1e-3;
  auto d1 = [&](double ex, double ey) {
    return (-value(f, x + 2 * h * ex, y + 2 * h * ey) + 8 * value(f, x + h * ex, y + h * ey) -
            8 * value(f, x - h * ex, y - h * ey) + value(f, x - 2 * h * ex, y - 2 * h * ey)) /
           (12 * h);
  };
  EXPECT_NEAR(j.v, value(f, x, y), 1e-15);
  EXPECT_NEAR(j.d(0), d1(1, 0), 1e-9);
  EXPECT_NEAR(j.d(1), d1(0, 1), 1e-9);
  const double hh = 1e-4;
  auto f0 = [&](double dx, double dy) { return value(f, x + dx, y + dy); };
  const double fxx = (f0(hh, 0) - 2 * f0(0, 0) + f0(-hh, 0)) / (hh * hh);
  const double fyy = (f0(0, hh) - 2 * f0(0, 0) + f0(0, -hh)) / (hh * hh);
  const double fxy = (f0(hh, hh) - f0(hh, -hh) - f0(-hh, hh) + f0(-hh, -hh)) / (4 * hh * hh);
  EXPECT_NEAR(j.dd(0, 0), fxx, 1e-5);
  EXPECT_NEAR(j.dd(1, 1), fyy, 1e-5);
  EXPECT_NEAR(j.dd(0, 1), fxy, 1e-5);
  EXPECT_EQ(j.dd(0, 1), j.dd(1, 0));
}

}  // namespace

TEST(Jet, ArithmeticAndElementaryFunctions) {
  expect_matches_fd([](const Jet2& a, const Jet2& b) { return a * b + 3.0 * a - b / (a + 2.0); }, 0.7, -0.4);
  expect_matches_fd([](const Jet2& a, const Jet2& b) { return sin(a) * cos(b) + sinh(a * b); }, 0.3, 1.1);
  expect_matches_fd([](const Jet2& a, const Jet2& b) { return cosh(a - b) / sqrt(1.0 + a * a); }, 0.5, 0.2);
  expect_matches_fd([](const Jet2& a, const Jet2& b) { return asinh(a * b) - atan2(b, a); }, 0.8, 0.6);
  expect_matches_fd([](const Jet2& a, const Jet2& b) { return atan2(a - 1.0, -b); }, 0.4, 0.9);
}

TEST(Jet, TruncateDropsHessian) {
  const Jet2 j(1.0, Eigen::Vector2d(2, 3), Eigen::Matrix2d::Ones());
  const Jet1 t = truncate(j);
  EXPECT_EQ(t.v, 1.0);
  EXPECT_EQ(t.d, Eigen::Vector2d(2, 3));
}

TEST(Jet, FirstOrderJetAgreesWithSecondOrder) {
  const Jet1 a = Jet1::variable(0.4, 0), b = Jet1::variable(1.3, 1);
  const Jet1 f = sinh(a) * cos(b) / sqrt(a + 2.0);
  const Jet2 A = Jet2::variable(0.4, 0), B = Jet2::variable(1.3, 1);
  const Jet2 g = sinh(A) * cos(B) / sqrt(A + 2.0);
  EXPECT_DOUBLE_EQ(f.v, g.v);
  EXPECT_DOUBLE_EQ(f.d(0), g.d(0));
  EXPECT_DOUBLE_EQ(f.d(1), g.d(1));
}
