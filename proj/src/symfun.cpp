#include "dsrig/symfun.hpp"

#include "dsrig/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace dsrig {

namespace {

void require_same_dim(const SymOperator& a, const SymOperator& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "operator dimensions differ: " << a.dim() << " vs " << b.dim();
    throw DimensionMismatch(os.str());
  }
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace

SymOperator::SymOperator(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw InvalidOperator("operator matrix must be square");
  if (m.rows() < 1 || m.rows() > kMaxDim) throw InvalidOperator("operator dimension must be in [1, 8]");
  if (!m.allFinite()) throw InvalidOperator("operator entries must be finite");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw InvalidOperator("operator matrix is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

SymOperator SymOperator::identity(int n) {
  return SymOperator(Eigen::MatrixXd::Identity(n, n));
}

SymOperator SymOperator::zero(int n) {
  return SymOperator(Eigen::MatrixXd::Zero(n, n));
}

SymOperator SymOperator::diagonal(const std::vector<double>& d) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return SymOperator(m);
}

SymOperator SymOperator::operator-() const { return SymOperator(-m_, Trusted{}); }

SymOperator operator*(double s, const SymOperator& a) {
  return SymOperator(s * a.m_, SymOperator::Trusted{});
}

SymOperator operator+(const SymOperator& a, const SymOperator& b) {
  require_same_dim(a, b);
  return SymOperator(a.m_ + b.m_, SymOperator::Trusted{});
}

SymOperator operator-(const SymOperator& a, const SymOperator& b) {
  require_same_dim(a, b);
  return SymOperator(a.m_ - b.m_, SymOperator::Trusted{});
}

double sigma1(const SymOperator& w) { return w.matrix().trace(); }

double sigma2(const SymOperator& w) {
  const auto& m = w.matrix();
  const int n = w.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) s += m(i, i) * m(j, j) - m(i, j) * m(j, i);
  }
  return s;
}

std::vector<double> sigma_all(const SymOperator& w) {
  const int n = w.dim();
  std::vector<double> out(n + 1, 0.0);
  out[0] = 1.0;
  const auto& m = w.matrix();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    const int k = std::popcount(mask);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    Eigen::MatrixXd minor(k, k);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) minor(a, b) = m(idx[a], idx[b]);
    }
    out[k] += k == 1 ? minor(0, 0) : minor.fullPivLu().determinant();
  }
  // The k = 2 minors are exactly the sigma2 terms; keep the entrywise value.
  if (n >= 2) out[2] = sigma2(w);
  return out;
}

Eigen::MatrixXd d_sigma2(const SymOperator& w) {
  const auto& m = w.matrix();
  const int n = w.dim();
  const double tr = m.trace();
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) d(i, j) = i == j ? tr - m(i, i) : -m(j, i);
  }
  return d;
}

double sigma11(const SymOperator& w, const SymOperator& wt) {
  require_same_dim(w, wt);
  return 0.5 * d_sigma2(w).cwiseProduct(wt.matrix()).sum();
}

std::vector<double> sigma_k_line_coefficients(const SymOperator& w, int k) {
  const int n = w.dim();
  if (k < 0 || k > n) throw DimensionMismatch("sigma_k index out of range");
  const auto s = sigma_all(w);
  // sigma_k(W + tI) = sum_j C(n-j, k-j) sigma_j(W) t^(k-j)
  std::vector<double> c(k + 1, 0.0);
  for (int j = 0; j <= k; ++j) c[k - j] = binomial(n - j, k - j) * s[j];
  return c;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& ascending) {
  std::vector<double> c = ascending;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<std::complex<double>> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

std::string_view to_string(ConeLabel label) {
  switch (label) {
    case ConeLabel::PlusCone: return "PlusCone";
    case ConeLabel::MinusCone: return "MinusCone";
    case ConeLabel::Outside: return "Outside";
    case ConeLabel::Boundary: return "Boundary";
  }
  return "Unknown";
}

ConeLabel mirror(ConeLabel label) {
  switch (label) {
    case ConeLabel::PlusCone: return ConeLabel::MinusCone;
    case ConeLabel::MinusCone: return ConeLabel::PlusCone;
    default: return label;
  }
}

ConeReport cone_classify(const SymOperator& w) {
  const int n = w.dim();
  const double a = binomial(n, 2);
  const double b = (n - 1) * sigma1(w);
  const double c = sigma2(w);
  ConeReport r;
  if (n < 2) {
    throw DimensionMismatch("sigma_2 cone needs dimension >= 2");
  }
  double disc = b * b - 4.0 * a * c;
  const double scale = b * b + 4.0 * std::abs(a * c);
  if (disc < -kHyperbolicityTol * scale) {
    std::ostringstream os;
    os << "t -> sigma_2(W + tI) has complex roots (discriminant " << disc << ")";
    throw NonHyperbolic(os.str());
  }
  r.discriminant = disc;
  disc = std::max(disc, 0.0);
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  double r1 = 0.0, r2 = 0.0;
  if (q != 0.0) {
    r1 = q / a;
    r2 = c / q;
  }
  r.t1 = std::min(r1, r2);
  r.t2 = std::max(r1, r2);
  if (std::abs(r.t1) <= kConeBoundaryTol || std::abs(r.t2) <= kConeBoundaryTol) {
    r.label = ConeLabel::Boundary;
  } else if (r.t2 < 0.0) {
    r.label = ConeLabel::PlusCone;
  } else if (r.t1 > 0.0) {
    r.label = ConeLabel::MinusCone;
  } else {
    r.label = ConeLabel::Outside;
  }
  return r;
}

GardingGap garding_gap(const SymOperator& w, const SymOperator& wt, double tol_eq) {
  require_same_dim(w, wt);
  if (cone_classify(w).label != ConeLabel::PlusCone || cone_classify(wt).label != ConeLabel::PlusCone) {
    throw NotInCone("both operators must lie in the cone C(sigma_2, I)");
  }
  GardingGap g;
  g.sigma11 = sigma11(w, wt);
  g.geo_mean = std::sqrt(sigma2(w) * sigma2(wt));
  g.gap = g.sigma11 - g.geo_mean;
  g.equality = g.gap <= tol_eq * std::max(1.0, std::abs(g.geo_mean));

  const double s1 = sigma1(w);
  if (s1 != 0.0) {
    g.scale = sigma1(wt) / s1;
  } else {
    g.scale = w.matrix().cwiseProduct(wt.matrix()).sum() / w.matrix().squaredNorm();
  }
  const double denom = wt.matrix().norm();
  g.proportionality_residual = denom > 0.0 ? (wt.matrix() - g.scale * w.matrix()).norm() / denom : 0.0;
  return g;
}

}  // namespace dsrig
