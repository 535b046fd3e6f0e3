#pragma once

// Dense complex matrix primitives: tolerances, spectral decompositions,
// polar parts and ranks. Everything downstream is built on these.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace indextwo {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

enum class ErrorKind {
  NotHermitian,
  NotPositiveDefinite,
  NotSubalgebra,
  NotProjection,
  NonIntegralRank,
  NotInvolutive,
  NotAutomorphism,
  NotPartition,
  IndexInfinite,
  IndexNotTwo,
  BetaNotAutomorphism,
  QNotProjection,
  IsoResidualExceeded,
  NotInAlgebra,
  NotTwoZInner,
  TraceNotFaithful,
  DimensionMismatch,
  ParseError,
  InvalidExpectation,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotSubalgebra: return "NotSubalgebra";
    case ErrorKind::NotProjection: return "NotProjection";
    case ErrorKind::NonIntegralRank: return "NonIntegralRank";
    case ErrorKind::NotInvolutive: return "NotInvolutive";
    case ErrorKind::NotAutomorphism: return "NotAutomorphism";
    case ErrorKind::NotPartition: return "NotPartition";
    case ErrorKind::IndexInfinite: return "IndexInfinite";
    case ErrorKind::IndexNotTwo: return "IndexNotTwo";
    case ErrorKind::BetaNotAutomorphism: return "BetaNotAutomorphism";
    case ErrorKind::QNotProjection: return "QNotProjection";
    case ErrorKind::IsoResidualExceeded: return "IsoResidualExceeded";
    case ErrorKind::NotInAlgebra: return "NotInAlgebra";
    case ErrorKind::NotTwoZInner: return "NotTwoZInner";
    case ErrorKind::TraceNotFaithful: return "TraceNotFaithful";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidExpectation: return "InvalidExpectation";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical tolerances shared by every check. `sample_count` and `rng_seed`
/// drive the randomized parts of verification.
struct Tol {
  double abs_eps = 1e-9;
  double rel_eps = 1e-9;
  int sample_count = 64;
  std::uint64_t rng_seed = 20240601ULL;

  void validate() const {
    if (!(abs_eps > 0.0) || !(rel_eps > 0.0) || sample_count <= 0)
      throw std::invalid_argument("Tol: abs_eps, rel_eps and sample_count must be positive");
  }

  /// Pass threshold for a residual against values of magnitude `scale`.
  double bound(double scale = 1.0) const { return abs_eps + rel_eps * scale; }

  /// Singular-value cutoff: abs_eps relative to the largest value, floored at abs_eps.
  double cutoff(double largest) const { return std::max(abs_eps, abs_eps * largest); }

  Tol with_seed(std::uint64_t seed) const {
    Tol t = *this;
    t.rng_seed = seed;
    return t;
  }
};

using Rng = std::mt19937_64;

inline Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

inline Mat zeros(Eigen::Index r, Eigen::Index c) { return Mat::Zero(r, c); }

/// Matrix unit e_{ij} (zero-based).
inline Mat unit(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Mat m = Mat::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

inline Mat diag(std::initializer_list<Complex> d) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (auto v : d) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

inline Mat adjoint(const Mat& m) { return m.adjoint(); }

inline bool all_finite(const Mat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  return true;
}

inline double norm(const Mat& m) { return m.norm(); }

inline double dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

inline double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

inline Mat block_diag(const Mat& a, const Mat& b) {
  Mat m = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat m(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return m;
}

/// Column-major flattening; vec(x)^H vec(y) = tr(x^* y).
inline Vec vec(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

inline Mat unvec(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

inline double hermitian_defect(const Mat& m) { return (m - m.adjoint()).norm(); }

struct EigResult {
  RealVec values;  // descending
  Mat vectors;     // orthonormal columns
};

inline EigResult hermitian_eig(const Mat& m, const Tol& tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NotHermitian, "matrix is not square");
  const double defect = hermitian_defect(m);
  if (defect > tol.bound(m.norm()))
    throw Error(ErrorKind::NotHermitian, "||m - m*|| = " + std::to_string(defect));
  Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const Eigen::Index n = h.rows();
  EigResult r{RealVec(n), Mat(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    r.values(k) = es.eigenvalues()(n - 1 - k);
    r.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return r;
}

inline RealVec singular_values(const Mat& m) {
  if (m.size() == 0) return RealVec();
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues();
}

inline int rank_tol(const Mat& m, const Tol& tol) {
  RealVec s = singular_values(m);
  if (s.size() == 0) return 0;
  const double cut = tol.cutoff(s(0));
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

/// The partial isometry v of the polar decomposition m = v (m*m)^{1/2}.
inline Mat polar_partial_isometry(const Mat& m, const Tol& tol) {
  if (m.size() == 0) return m;
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVec& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= tol.abs_eps) return Mat::Zero(m.rows(), m.cols());
  const double cut = tol.cutoff(s(0));
  Mat v = Mat::Zero(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cut) v += svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
  return v;
}

/// Positive square root of a positive semidefinite matrix.
inline Mat psd_sqrt(const Mat& m, const Tol& tol) {
  EigResult e = hermitian_eig(m, tol);
  RealVec d = e.values.unaryExpr([](double x) { return std::sqrt(std::max(x, 0.0)); });
  return e.vectors * d.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

inline Mat psd_inv_sqrt(const Mat& m, const Tol& tol) {
  EigResult e = hermitian_eig(m, tol);
  const Eigen::Index n = e.values.size();
  if (n == 0) return m;
  const double largest = std::max(std::abs(e.values(0)), std::abs(e.values(n - 1)));
  const double cut = tol.cutoff(largest);
  if (e.values(n - 1) <= cut)
    throw Error(ErrorKind::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(e.values(n - 1)));
  RealVec d = e.values.unaryExpr([](double x) { return 1.0 / std::sqrt(x); });
  return e.vectors * d.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

/// Orthonormal basis of the null space of m (columns).
inline Mat null_space(const Mat& m, const Tol& tol) {
  const Eigen::Index cols = m.cols();
  if (cols == 0) return Mat(0, 0);
  if (m.rows() == 0) return Mat::Identity(cols, cols);
  // BDCSVD in Eigen 3.4.0 misreports complex spectra; Jacobi is exact enough at these sizes.
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const RealVec& s = svd.singularValues();
  const double cut = s.size() ? tol.cutoff(s(0)) : tol.abs_eps;
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > cut) ++r;
  return svd.matrixV().rightCols(cols - r);
}

/// Least-squares solution of a x = b together with the residual ||a x - b||.
inline std::pair<Mat, double> solve_ls(const Mat& a, const Mat& b) {
  if (a.cols() == 0) return {Mat::Zero(0, b.cols()), b.norm()};
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
  Mat x = cod.solve(b);
  return {x, (a * x - b).norm()};
}

inline Complex gaussian_complex(Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double re = nd(rng);
  const double im = nd(rng);
  return {re, im};
}

inline Mat random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  Mat m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = gaussian_complex(rng);
  return m;
}

inline Mat random_hermitian(Eigen::Index n, Rng& rng) {
  Mat m = random_matrix(n, n, rng);
  return 0.5 * (m + m.adjoint());
}

inline Mat random_unitary(Eigen::Index n, Rng& rng) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(n, n, rng));
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

/// Modified Gram-Schmidt (applied twice) on columns; drops columns whose
/// residual falls below the tolerance cutoff relative to the largest input.
inline Mat orthonormal_columns(const Mat& v, const Tol& tol) {
  double largest = 0.0;
  for (Eigen::Index j = 0; j < v.cols(); ++j) largest = std::max(largest, v.col(j).norm());
  const double cut = tol.cutoff(largest) * 10.0;
  std::vector<Vec> kept;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    Vec w = v.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& q : kept) w -= q * q.dot(w);
    const double n = w.norm();
    if (n > cut) kept.push_back(w / n);
  }
  Mat q(v.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) q.col(static_cast<Eigen::Index>(k)) = kept[k];
  return q;
}

}  // namespace indextwo
