#pragma once
//
// Integral identities over a pair (M, Mt) of graphs and the rigidity
// experiment. Every tilde quantity is pulled back to M through the pair's
// correspondence, and Mt's Weingarten map is expressed in the push-forward
// of M's orthonormal frame.

#include "dsrig/hypersurface.hpp"
#include "dsrig/quadrature.hpp"

#include <array>
#include <string>
#include <vector>

namespace dsrig {

/// Everything the identities need at one quadrature node of M.
struct PairNode {
  ChartPoint u;
  ChartPoint target;
  PointGeometry geo;    ///< M at u, with Hess(Phi)
  PointGeometry geo_t;  ///< Mt at target (no Hessian)
  Eigen::Matrix2d Wt;   ///< Mt's Weingarten map in the frame A e_i
  Eigen::Matrix2d hess_phi_t;  ///< Hess^M(Phi~ o f) in M's frame
  double phi_p = 0.0;    ///< phi'(y) = sinh y
  double phi_t_p = 0.0;  ///< phi'(y~ o f)
  double area = 0.0;     ///< sqrt det g
  double metric_mismatch = 0.0;  ///< max |g - A^T g~ A|
};

/// Evaluates all nodes of `rule`. Throws CorrespondenceInvalid when the
/// image height read from Mt disagrees with the pushed-forward point by more
/// than 1e-8, and NonSpacelike/ChartPole from the geometry layer.
std::vector<PairNode> evaluate_pair(const IsometricPair& pair, const QuadratureRule& rule);

enum class IdentityId { A, B, C, D };
std::string_view to_string(IdentityId id);

/// One of the four integral identities. The Hessian side (lhs) is integrated
/// directly; the closed-form side is (n-1)*term1 + 2*term2 with
///   rhs            = -(term1 + term2)   (what is asserted)
///   rhs_proof      =  (term1 + term2)   (sign of the algebraic proof step)
///   rhs_statement  =   term1 - term2    (sign as printed in the theorem)
struct IdentityReport {
  IdentityId id = IdentityId::A;
  double lhs = 0.0;
  double rhs = 0.0;
  double rhs_proof = 0.0;
  double rhs_statement = 0.0;
  double scale = 0.0;  ///< integral of |term1| + |term2|
  double residual_rel = 0.0;
  double residual_proof = 0.0;
  double residual_statement = 0.0;
  double pointwise_max = 0.0;   ///< max |lhs integrand - rhs integrand|
  double proof_step_max = 0.0;  ///< max |sum dsigma2 (phi~' phi' g + phi~' h s) - (term1 + term2)|
  std::string sign_note;
  bool pass = false;
};

struct IdentitySuite {
  std::array<IdentityReport, 4> identities;
  GateReport gate_M;
  GateReport gate_Mt;
};

inline constexpr double kIdentityTol = 1e-6;

/// Throws GateFailed unless both surfaces pass the curvature gate (Mt is
/// gated at the image nodes).
IdentitySuite verify_integral_identities(const IsometricPair& pair, const QuadratureRule& rule,
                                         double tol = kIdentityTol);
IdentitySuite verify_integral_identities(const std::vector<PairNode>& nodes, const QuadratureRule& rule,
                                         double tol = kIdentityTol);

struct TildeSymmetryReport {
  double with_tilde_hessian = 0.0;  ///< int dsigma2(W) phi' Hess(Phi~)
  double with_hessian = 0.0;        ///< int dsigma2(W) phi~' Hess(Phi)
  double scale = 0.0;
  double residual_rel = 0.0;
  bool pass = false;
};

TildeSymmetryReport verify_tilde_symmetry(const IsometricPair& pair, const QuadratureRule& rule,
                                          double tol = kIdentityTol);
TildeSymmetryReport verify_tilde_symmetry(const std::vector<PairNode>& nodes, const QuadratureRule& rule,
                                          double tol = kIdentityTol);

enum class RigidityVerdict { Rigid, NonRigid, NotIsometric, GateFailed };
std::string_view to_string(RigidityVerdict v);

struct RigidityTolerances {
  double metric = 1e-8;        ///< pointwise |g - f*g~|
  double integral_rel = 1e-8;  ///< |integral| / area
  double w_mismatch = 1e-6;    ///< max ||W - W~||_F
};

struct RigidityReport {
  double integral_value = 0.0;
  double area = 0.0;
  double integral_rel = 0.0;
  double max_W_mismatch = 0.0;
  double sign_factor_min = 0.0;  ///< min of -(phi~' <V,nu> + phi' <V~,nu~>)
  double gap_max = 0.0;          ///< max of sigma11(W, W~) - sigma2(W)
  double gap_min = 0.0;
  double metric_mismatch = 0.0;
  double min_height = 0.0;    ///< over M and the image nodes on Mt
  GateReport gate_M;
  GateReport gate_Mt;
  RigidityVerdict verdict = RigidityVerdict::GateFailed;
  std::string reason;
};

RigidityReport rigidity_experiment(const IsometricPair& pair, const QuadratureRule& rule,
                                   const RigidityTolerances& tol = {});

}  // namespace dsrig
