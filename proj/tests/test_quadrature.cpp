#include "dsrig/errors.hpp"
#include "dsrig/quadrature.hpp"

#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace dsrig;
using std::numbers::pi;

namespace {

// Integral over the unit sphere: the rule's weights are for dtheta dphi.
template <class F>
double sphere_integral(const QuadratureRule& rule, F f) {
  std::vector<double> v(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) v[k] = f(rule.nodes[k]) * std::sin(rule.nodes[k].theta);
  return integrate_nodes(v, rule);
}

}  // namespace

TEST(Quadrature, LayoutAndErrors) {
  const auto r = QuadratureRule::gauss_sphere(8, 16);
  EXPECT_EQ(r.size(), 128u);
  EXPECT_EQ(r.weights.size(), 128u);
  for (const auto& u : r.nodes) {
    EXPECT_GT(u.theta, 0.0);
    EXPECT_LT(u.theta, pi);
  }
  // theta-major
  EXPECT_EQ(r.nodes[0].theta, r.nodes[15].theta);
  EXPECT_NE(r.nodes[0].phi, r.nodes[1].phi);
  EXPECT_THROW(QuadratureRule::gauss_sphere(1, 16), ConfigError);
  EXPECT_THROW(QuadratureRule::gauss_sphere(16, 1), ConfigError);
}

TEST(Quadrature, AreaOfUnitSphere) {
  for (int n : {16, 32, 64}) {
    const auto r = QuadratureRule::gauss_sphere(n, 2 * n);
    EXPECT_NEAR(sphere_integral(r, [](ChartPoint) { return 1.0; }), 4 * pi, 1e-12);
  }
}

TEST(Quadrature, HarmonicOrthonormalityUpToDegreeTwenty) {
  const auto r = QuadratureRule::gauss_sphere(64, 128);
  for (int l = 0; l <= 20; l += 1)
    for (int m = -l; m <= l; m += std::max(1, l / 3)) {
      const double norm = sphere_integral(r, [&](ChartPoint u) {
        return std::norm(boost::math::spherical_harmonic<double>(l, m, u.theta, u.phi));
      });
      EXPECT_NEAR(norm, 1.0, 1e-10) << l << " " << m;
      const double cross = sphere_integral(r, [&](ChartPoint u) {
        return boost::math::spherical_harmonic_r<double>(l, m, u.theta, u.phi) *
               boost::math::spherical_harmonic_r<double>(std::min(20, l + 1), m, u.theta, u.phi);
      });
      if (l < 20) {
        EXPECT_NEAR(cross, 0.0, 1e-10);
      }
    }
}

TEST(Quadrature, OddZonalFunctionIntegratesToZero) {
  const auto r = QuadratureRule::gauss_sphere(33, 64);
  EXPECT_NEAR(sphere_integral(r, [](ChartPoint u) { return std::pow(std::cos(u.theta), 5) + std::cos(u.theta); }), 0.0,
              1e-14);
}

TEST(Quadrature, SliceArea) {
  const auto r = QuadratureRule::gauss_sphere(64, 128);
  for (double rho0 : {0.0, 0.5, -0.8, 1.3}) {
    const auto s = GraphSurface::analytic(AnalyticDescriptor::slice(rho0));
    const double area = integrate_over_M(s, [](ChartPoint) { return 1.0; }, r);
    EXPECT_NEAR(area / (4 * pi * std::pow(std::cosh(rho0), 2)), 1.0, 1e-12);
  }
}

TEST(Quadrature, NonSpacelikeSurfaceIsRejected) {
  const auto s = GraphSurface::analytic(AnalyticDescriptor::perturbed_slice(0.5, 3.0, 2, 0));
  EXPECT_THROW(integrate_over_M(s, [](ChartPoint) { return 1.0; }, QuadratureRule::gauss_sphere(16, 32)), NonSpacelike);
}

TEST(CompensatedSum, RecoversCancellation) {
  EXPECT_EQ(compensated_sum({1.0, 1e100, 1.0, -1e100}), 2.0);
  EXPECT_EQ(compensated_sum({}), 0.0);
}
