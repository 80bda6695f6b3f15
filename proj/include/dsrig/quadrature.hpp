#pragma once
//
// Product quadrature on S^2: Gauss-Legendre in cos(theta) times the
// uniform trapezoid rule in phi. Weights are for the chart measure
// dtheta dphi, so integrating f against the area element of a graph is
// sum_k w_k f(u_k) sqrt(det g(u_k)).

#include "dsrig/surface.hpp"

#include <functional>
#include <vector>

namespace dsrig {

struct QuadratureRule {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<ChartPoint> nodes;  ///< theta-major: k = i * n_phi + j
  std::vector<double> weights;

  /// Throws ConfigError for degrees below 2.
  static QuadratureRule gauss_sphere(int n_theta, int n_phi);

  std::size_t size() const { return nodes.size(); }
};

/// Neumaier-compensated sum in the given order.
double compensated_sum(const std::vector<double>& terms);

/// sum_k w_k f(u_k) * sqrt(det g(u_k)). Throws NonSpacelike if g fails to be
/// positive definite at a node.
double integrate_over_M(const GraphSurface& s, const std::function<double(ChartPoint)>& f,
                        const QuadratureRule& rule);

/// Same reduction for precomputed per-node integrand values (f * sqrt det g
/// already folded in by the caller).
double integrate_nodes(const std::vector<double>& values, const QuadratureRule& rule);

}  // namespace dsrig
