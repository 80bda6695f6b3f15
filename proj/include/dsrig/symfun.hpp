#pragma once
//
// Elementary symmetric functions of self-adjoint operators, the Garding
// cone of sigma_2 with respect to the identity, and the polarized form
// sigma_{1,1} together with the Garding inequality for degree two.
//
// All operators are given in an orthonormal frame, so "self-adjoint" means
// "symmetric matrix". Everything here is a pure function.

#include <Eigen/Dense>

#include <complex>
#include <string_view>
#include <vector>

namespace dsrig {

/// Symmetric n x n matrix, 1 <= n <= 8, with finite entries.
///
/// Construction rejects matrices whose asymmetry exceeds 1e-9 of their
/// largest entry and then stores the exact average (A + A^T)/2, so the
/// stored entries satisfy a(i,j) == a(j,i) bit for bit.
class SymOperator {
 public:
  static constexpr int kMaxDim = 8;

  explicit SymOperator(const Eigen::MatrixXd& m);

  static SymOperator identity(int n);
  static SymOperator zero(int n);
  static SymOperator diagonal(const std::vector<double>& d);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  SymOperator operator-() const;
  friend SymOperator operator*(double s, const SymOperator& a);
  friend SymOperator operator+(const SymOperator& a, const SymOperator& b);
  friend SymOperator operator-(const SymOperator& a, const SymOperator& b);

 private:
  struct Trusted {};
  SymOperator(Eigen::MatrixXd m, Trusted) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

double sigma1(const SymOperator& w);

/// sum_{i<j} w_ii w_jj - w_ij w_ji, evaluated entrywise.
double sigma2(const SymOperator& w);

/// (sigma_0, ..., sigma_n), each sigma_k the sum of the k x k principal
/// minors. These are the coefficients of det(t I - W) up to alternating sign.
std::vector<double> sigma_all(const SymOperator& w);

/// Matrix of partial derivatives d sigma_2 / d w_ij:
/// diagonal sum_{k != i} w_kk, off-diagonal -w_ji.
Eigen::MatrixXd d_sigma2(const SymOperator& w);

/// Polarized form of sigma_2: (1/2) sum_ij (d sigma_2/d w_ij)(W) wt_ij.
double sigma11(const SymOperator& w, const SymOperator& wt);

/// Coefficients (ascending powers of t) of t -> sigma_k(W + t I).
std::vector<double> sigma_k_line_coefficients(const SymOperator& w, int k);

/// All complex roots of sum_i c_i t^i (companion-matrix eigenvalues).
/// Leading zero coefficients are dropped.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& ascending);

enum class ConeLabel { PlusCone, MinusCone, Outside, Boundary };

std::string_view to_string(ConeLabel label);

/// Mirror under W -> -W.
ConeLabel mirror(ConeLabel label);

struct ConeReport {
  double t1 = 0.0;  ///< smaller root of t -> sigma_2(W + t I)
  double t2 = 0.0;  ///< larger root
  double discriminant = 0.0;
  ConeLabel label = ConeLabel::Outside;
};

inline constexpr double kConeBoundaryTol = 1e-12;
inline constexpr double kHyperbolicityTol = 1e-9;
inline constexpr double kEqualityTol = 1e-10;

/// Classifies W against the cones C(sigma_2, I) (PlusCone) and
/// C(sigma_2, -I) (MinusCone) using the roots of
///   C(n,2) t^2 + (n-1) sigma_1(W) t + sigma_2(W).
/// Throws NonHyperbolic when the discriminant is below -1e-9 of its scale.
ConeReport cone_classify(const SymOperator& w);

struct GardingGap {
  double sigma11 = 0.0;
  double geo_mean = 0.0;  ///< sqrt(sigma_2(W) sigma_2(Wt))
  double gap = 0.0;       ///< sigma11 - geo_mean
  bool equality = false;
  /// Recovered proportionality factor c with Wt ~ c W.
  double scale = 0.0;
  /// ||Wt - c W||_F / ||Wt||_F.
  double proportionality_residual = 0.0;
};

/// Garding inequality for sigma_2. Both arguments must lie in PlusCone
/// (throws NotInCone otherwise); mismatched sizes throw DimensionMismatch.
GardingGap garding_gap(const SymOperator& w, const SymOperator& wt, double tol_eq = kEqualityTol);

}  // namespace dsrig
