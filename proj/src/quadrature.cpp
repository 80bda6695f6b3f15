#include "dsrig/quadrature.hpp"

#include "dsrig/errors.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace dsrig {

QuadratureRule QuadratureRule::gauss_sphere(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2) throw ConfigError("quadrature degrees must be at least 2");
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(n_theta)), &gsl_integration_glfixed_table_free);
  if (!table) throw ConfigError("could not build Gauss-Legendre table");

  QuadratureRule r;
  r.n_theta = n_theta;
  r.n_phi = n_phi;
  r.nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  r.weights.reserve(r.nodes.capacity());
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  for (int i = 0; i < n_theta; ++i) {
    double x = 0.0, w = 0.0;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &x, &w, table.get());
    const double theta = std::acos(x);
    const double chart_w = w / std::sin(theta) * dphi;
    for (int j = 0; j < n_phi; ++j) {
      r.nodes.push_back({theta, j * dphi});
      r.weights.push_back(chart_w);
    }
  }
  return r;
}

double compensated_sum(const std::vector<double>& terms) {
  double sum = 0.0, c = 0.0;
  for (double t : terms) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      c += (sum - s) + t;
    } else {
      c += (t - s) + sum;
    }
    sum = s;
  }
  return sum + c;
}

double integrate_nodes(const std::vector<double>& values, const QuadratureRule& rule) {
  if (values.size() != rule.size()) throw DimensionMismatch("integrand size does not match the rule");
  std::vector<double> terms(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) terms[k] = rule.weights[k] * values[k];
  return compensated_sum(terms);
}

double integrate_over_M(const GraphSurface& s, const std::function<double(ChartPoint)>& f,
                        const QuadratureRule& rule) {
  std::vector<double> values(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const ChartPoint u = rule.nodes[k];
    const Eigen::Matrix2d g = s.metric_jet(u).g;
    const double det = g.determinant();
    if (!(g(0, 0) > 0.0 && det > 0.0)) {
      std::ostringstream os;
      os << "induced metric is not positive definite at theta=" << u.theta << " phi=" << u.phi;
      throw NonSpacelike(os.str());
    }
    values[k] = f(u) * std::sqrt(det);
  }
  return integrate_nodes(values, rule);
}

}  // namespace dsrig
