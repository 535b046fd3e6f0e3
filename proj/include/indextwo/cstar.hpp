#pragma once

// Finite-dimensional C*-algebras realized as *-closed subspaces of an
// ambient M_n, linear maps between them, and their block structure.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "matkernel.hpp"

namespace indextwo {

/// A *-closed unital subalgebra of M_n with a basis orthonormal for the
/// normalized trace inner product <x, y> = tr(x^* y) / n.
class CStarAlg {
 public:
  CStarAlg() : d_(std::make_shared<Data>()) {}

  /// Orthonormalizes `spanning` and locates the unit. The span is assumed to
  /// already be an algebra; use `generate_algebra` to close a generating set.
  static CStarAlg from_spanning(Eigen::Index n, const std::vector<Mat>& spanning, const Tol& tol) {
    auto d = std::make_shared<Data>();
    d->n = n;
    Mat cols(n * n, static_cast<Eigen::Index>(spanning.size()));
    for (std::size_t k = 0; k < spanning.size(); ++k) {
      if (spanning[k].rows() != n || spanning[k].cols() != n)
        throw Error(ErrorKind::DimensionMismatch, "spanning element is not " + std::to_string(n) + "x" +
                                                      std::to_string(n));
      cols.col(static_cast<Eigen::Index>(k)) = vec(spanning[k]);
    }
    d->q = orthonormal_columns(cols, tol);
    const double root_n = std::sqrt(static_cast<double>(n));
    for (Eigen::Index k = 0; k < d->q.cols(); ++k)
      d->basis.push_back(unvec(d->q.col(k) * root_n, n, n));
    Data* raw = d.get();
    CStarAlg a(std::move(d));
    raw->unit = a.locate_unit(tol);
    return a;
  }

  Eigen::Index ambient_dim() const { return d_->n; }
  Eigen::Index dim() const { return d_->q.cols(); }
  const std::vector<Mat>& basis() const { return d_->basis; }
  const Mat& unit() const { return d_->unit; }

  Vec coords(const Mat& m) const {
    return d_->q.adjoint() * vec(m) / std::sqrt(static_cast<double>(d_->n));
  }
  Mat from_coords(const Vec& c) const {
    return unvec(d_->q * c * std::sqrt(static_cast<double>(d_->n)), d_->n, d_->n);
  }
  Mat project(const Mat& m) const { return unvec(d_->q * (d_->q.adjoint() * vec(m)), d_->n, d_->n); }
  double residual(const Mat& m) const { return (m - project(m)).norm(); }
  bool contains(const Mat& m, const Tol& tol) const { return residual(m) <= tol.bound(m.norm()); }

  /// Largest failure of *-closure and multiplicative closure over basis pairs.
  double closure_residual() const {
    double r = 0.0;
    for (const Mat& x : basis()) {
      r = std::max(r, residual(x.adjoint()));
      for (const Mat& y : basis()) r = std::max(r, residual(x * y));
    }
    return r;
  }

  /// Same subspace of the same ambient.
  bool same_as(const CStarAlg& other, const Tol& tol) const {
    if (other.ambient_dim() != ambient_dim() || other.dim() != dim()) return false;
    for (const Mat& b : other.basis())
      if (!contains(b, tol)) return false;
    return true;
  }

 private:
  struct Data {
    Eigen::Index n = 0;
    Mat q;  // n^2 x dim, orthonormal columns vec(b_k)/sqrt(n)
    std::vector<Mat> basis;
    Mat unit;
  };
  explicit CStarAlg(std::shared_ptr<Data> d) : d_(std::move(d)) {}

  Mat locate_unit(const Tol& tol) const {
    const Eigen::Index n = d_->n;
    if (dim() == 0) return Mat::Zero(n, n);
    Mat one = Mat::Identity(n, n);
    if (residual(one) <= tol.bound(one.norm()) * 10.0) return one;
    // A unit, if any, is the support projection of sum b b*.
    Mat h = Mat::Zero(n, n);
    for (const Mat& b : basis()) h += b * b.adjoint();
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
    const RealVec& ev = es.eigenvalues();
    const double cut = tol.cutoff(ev.size() ? ev(ev.size() - 1) : 0.0) * 10.0;
    Mat e = Mat::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
      if (ev(k) > cut) e += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    double res = residual(e);
    for (const Mat& b : basis()) res = std::max({res, (e * b - b).norm(), (b * e - b).norm()});
    if (res > 1e3 * tol.bound(std::sqrt(static_cast<double>(n))))
      throw Error(ErrorKind::NotSubalgebra, "span has no unit (residual " + std::to_string(res) + ")");
    return project(e);
  }

  std::shared_ptr<const Data> d_;
};

/// A linear subspace of p x q matrices with a Frobenius-orthonormal basis.
class Subspace {
 public:
  Subspace() = default;

  static Subspace from_spanning(Eigen::Index rows, Eigen::Index cols, const std::vector<Mat>& spanning,
                                const Tol& tol) {
    Subspace s;
    s.rows_ = rows;
    s.cols_ = cols;
    Mat v(rows * cols, static_cast<Eigen::Index>(spanning.size()));
    for (std::size_t k = 0; k < spanning.size(); ++k) v.col(static_cast<Eigen::Index>(k)) = vec(spanning[k]);
    s.q_ = orthonormal_columns(v, tol);
    for (Eigen::Index k = 0; k < s.q_.cols(); ++k) s.basis_.push_back(unvec(s.q_.col(k), rows, cols));
    return s;
  }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index dim() const { return q_.cols(); }
  const std::vector<Mat>& basis() const { return basis_; }
  Vec coords(const Mat& m) const { return q_.adjoint() * vec(m); }
  Mat from_coords(const Vec& c) const { return unvec(q_ * c, rows_, cols_); }
  double residual(const Mat& m) const { return (m - from_coords(coords(m))).norm(); }

 private:
  Eigen::Index rows_ = 0, cols_ = 0;
  Mat q_;
  std::vector<Mat> basis_;
};

inline std::vector<Mat> adjoints(const std::vector<Mat>& ms) {
  std::vector<Mat> out;
  out.reserve(ms.size());
  for (const Mat& m : ms) out.push_back(m.adjoint());
  return out;
}

/// Smallest unital *-subalgebra of M_n containing the generators.
inline CStarAlg generate_algebra(Eigen::Index n, const std::vector<Mat>& generators, const Tol& tol) {
  std::vector<Mat> span{Mat::Identity(n, n)};
  for (const Mat& g : generators) {
    if (g.rows() != n || g.cols() != n)
      throw Error(ErrorKind::DimensionMismatch, "generator is not " + std::to_string(n) + "x" + std::to_string(n));
    span.push_back(g);
    span.push_back(g.adjoint());
  }
  CStarAlg alg = CStarAlg::from_spanning(n, span, tol);
  for (;;) {
    std::vector<Mat> grown = alg.basis();
    for (const Mat& x : alg.basis())
      for (const Mat& y : alg.basis()) {
        Mat p = x * y;
        if (!alg.contains(p, tol)) grown.push_back(p);
      }
    if (grown.size() == static_cast<std::size_t>(alg.dim())) return alg;
    CStarAlg next = CStarAlg::from_spanning(n, grown, tol);
    if (next.dim() == alg.dim()) return alg;
    alg = next;
  }
}

struct Membership {
  bool member = false;
  Mat projection;
  double residual = 0.0;
};

inline Membership project_member(const CStarAlg& alg, const Mat& m, const Tol& tol) {
  Mat p = alg.project(m);
  const double r = (m - p).norm();
  return {r <= tol.bound(m.norm()), p, r};
}

/// Linear map between two algebras, stored as a coefficient matrix in their bases.
class LinearMap {
 public:
  LinearMap() = default;
  LinearMap(CStarAlg domain, CStarAlg codomain, Mat coeffs)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), coeffs_(std::move(coeffs)) {}

  /// Tabulates `f` on the domain basis. Throws NotInAlgebra when an image
  /// leaves the codomain.
  template <class F>
  static LinearMap from_function(const CStarAlg& domain, const CStarAlg& codomain, F&& f, const Tol& tol) {
    Mat c(codomain.dim(), domain.dim());
    for (Eigen::Index k = 0; k < domain.dim(); ++k) {
      Mat img = f(domain.basis()[static_cast<std::size_t>(k)]);
      if (img.rows() != codomain.ambient_dim() || img.cols() != codomain.ambient_dim())
        throw Error(ErrorKind::DimensionMismatch, "image has wrong shape");
      const double r = codomain.residual(img);
      if (r > tol.bound(img.norm()) * 10.0)
        throw Error(ErrorKind::NotInAlgebra, "image of basis element " + std::to_string(k) +
                                                 " leaves the codomain (residual " + std::to_string(r) + ")");
      c.col(k) = codomain.coords(img);
    }
    return LinearMap(domain, codomain, std::move(c));
  }

  static LinearMap identity(const CStarAlg& a) {
    return LinearMap(a, a, Mat::Identity(a.dim(), a.dim()));
  }

  const CStarAlg& domain() const { return domain_; }
  const CStarAlg& codomain() const { return codomain_; }
  const Mat& matrix() const { return coeffs_; }

  Mat operator()(const Mat& x) const { return codomain_.from_coords(coeffs_ * domain_.coords(x)); }
  Vec apply_coords(const Vec& c) const { return coeffs_ * c; }

  /// this followed by `next`.
  LinearMap then(const LinearMap& next) const {
    return LinearMap(domain_, next.codomain_, next.coeffs_ * coeffs_);
  }

  LinearMap scaled(Complex s) const { return LinearMap(domain_, codomain_, s * coeffs_); }

  LinearMap plus(const LinearMap& other) const {
    return LinearMap(domain_, codomain_, coeffs_ + other.coeffs_);
  }

  LinearMap inverse(const Tol& tol) const {
    if (coeffs_.rows() != coeffs_.cols() || rank_tol(coeffs_, tol) != coeffs_.cols())
      throw Error(ErrorKind::NotAutomorphism, "linear map is not invertible");
    return LinearMap(codomain_, domain_, coeffs_.inverse());
  }

  int rank(const Tol& tol) const { return rank_tol(coeffs_, tol); }

  /// Residual of the map against its expected action on the domain basis.
  template <class F>
  double max_deviation(F&& expected) const {
    double r = 0.0;
    for (const Mat& b : domain_.basis()) r = std::max(r, ((*this)(b)-expected(b)).norm());
    return r;
  }

 private:
  CStarAlg domain_;
  CStarAlg codomain_;
  Mat coeffs_;
};

/// Unique linear map sending src[k] to dst[k], or failure when the
/// assignment is inconsistent. Returns the map and the consistency residual.
inline std::pair<LinearMap, double> solve_linear_map(const CStarAlg& domain, const std::vector<Mat>& src,
                                                     const CStarAlg& codomain, const std::vector<Mat>& dst) {
  const auto count = static_cast<Eigen::Index>(src.size());
  Mat s(domain.dim(), count), t(codomain.dim(), count);
  for (Eigen::Index k = 0; k < count; ++k) {
    s.col(k) = domain.coords(src[static_cast<std::size_t>(k)]);
    t.col(k) = codomain.coords(dst[static_cast<std::size_t>(k)]);
  }
  // coeffs * s = t  <=>  s^T coeffs^T = t^T
  auto [xt, res] = solve_ls(s.transpose(), t.transpose());
  return {LinearMap(domain, codomain, xt.transpose()), res};
}

inline double projection_defect(const Mat& p) { return std::max((p * p - p).norm(), (p - p.adjoint()).norm()); }

inline bool is_projection(const Mat& p, const Tol& tol) { return projection_defect(p) <= tol.bound(p.norm()); }

/// {x in within : xa = ax for all a in alg}.
inline CStarAlg commutant(const CStarAlg& alg, const CStarAlg& within, const Tol& tol) {
  if (alg.ambient_dim() != within.ambient_dim())
    throw Error(ErrorKind::DimensionMismatch, "commutant: ambient dimensions differ");
  for (const Mat& a : alg.basis())
    if (!within.contains(a, tol)) throw Error(ErrorKind::NotSubalgebra, "algebra is not contained in `within`");
  const Eigen::Index n = alg.ambient_dim(), n2 = n * n;
  Mat sys(alg.dim() * n2, within.dim());
  for (Eigen::Index j = 0; j < within.dim(); ++j) {
    const Mat& w = within.basis()[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < alg.dim(); ++i) {
      const Mat& a = alg.basis()[static_cast<std::size_t>(i)];
      sys.block(i * n2, j, n2, 1) = vec(w * a - a * w);
    }
  }
  Mat ns = null_space(sys, tol);
  std::vector<Mat> span;
  for (Eigen::Index k = 0; k < ns.cols(); ++k) span.push_back(within.from_coords(ns.col(k)));
  return CStarAlg::from_spanning(n, span, tol);
}

inline CStarAlg center(const CStarAlg& alg, const Tol& tol) { return commutant(alg, alg, tol); }

/// Wedderburn data: minimal central projections z_k, simple-summand sizes
/// n_k and multiplicities m_k of the ambient representation.
struct BlockStructure {
  std::vector<Mat> central_projections;
  std::vector<int> block_sizes;
  std::vector<int> multiplicities;

  std::size_t count() const { return central_projections.size(); }
};

inline int rounded_or_throw(double x, const std::string& what) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-3)
    throw Error(ErrorKind::NonIntegralRank, what + " = " + std::to_string(x) + " is not an integer");
  return static_cast<int>(r);
}

inline BlockStructure block_structure(const CStarAlg& alg, const Tol& tol) {
  const Eigen::Index n = alg.ambient_dim();
  CStarAlg z = center(alg, tol);
  Rng rng(tol.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat h = Mat::Zero(n, n);
  for (const Mat& c : z.basis()) {
    h += nd(rng) * (c + c.adjoint());
    h += nd(rng) * Complex(0.0, 1.0) * (c - c.adjoint());
  }
  // Restrict to the range of the unit so the complement never merges with a block.
  EigResult ue = hermitian_eig(alg.unit(), tol);
  Eigen::Index support = 0;
  for (Eigen::Index k = 0; k < ue.values.size(); ++k)
    if (ue.values(k) > 0.5) ++support;
  Mat range = ue.vectors.leftCols(support);
  EigResult he = hermitian_eig(range.adjoint() * h * range, tol);

  BlockStructure bs;
  const Eigen::Index m = he.values.size();
  double spread = 1.0;
  for (Eigen::Index k = 0; k < m; ++k) spread = std::max(spread, std::abs(he.values(k)));
  // eigenvalues are descending; walk ascending so block order follows the spectrum
  Eigen::Index k = m;
  while (k > 0) {
    Eigen::Index start = k - 1;
    while (start > 0 && he.values(start - 1) - he.values(start) <= 1e-6 * spread) --start;
    Mat vecs = he.vectors.middleCols(start, k - start);
    Mat zk = range * vecs * vecs.adjoint() * range.adjoint();
    std::vector<Mat> span;
    for (const Mat& b : alg.basis()) span.push_back(zk * b);
    Mat cols(n * n, static_cast<Eigen::Index>(span.size()));
    for (std::size_t i = 0; i < span.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = vec(span[i]);
    const int dk = rank_tol(cols, tol);
    const int nk = rounded_or_throw(std::sqrt(static_cast<double>(dk)), "block size");
    const int rk = rounded_or_throw(zk.trace().real(), "central projection rank");
    bs.central_projections.push_back(alg.project(zk));
    bs.block_sizes.push_back(nk);
    bs.multiplicities.push_back(nk > 0 ? rk / nk : 0);
    k = start;
  }
  return bs;
}

/// Rank of projection p in each irreducible representation of alg.
inline std::vector<int> block_ranks(const CStarAlg& alg, const BlockStructure& bs, const Mat& p, const Tol& tol) {
  if (!is_projection(p, tol)) throw Error(ErrorKind::NotProjection, "block_ranks: argument is not a projection");
  if (!alg.contains(p, tol)) throw Error(ErrorKind::NotInAlgebra, "block_ranks: projection outside the algebra");
  std::vector<int> ranks;
  for (std::size_t k = 0; k < bs.count(); ++k) {
    const double tr = (bs.central_projections[k] * p).trace().real();
    ranks.push_back(rounded_or_throw(tr / bs.multiplicities[k], "block rank"));
  }
  return ranks;
}

inline std::vector<int> block_ranks(const CStarAlg& alg, const Mat& p, const Tol& tol) {
  return block_ranks(alg, block_structure(alg, tol), p, tol);
}

struct Equivalence {
  bool equivalent = false;
  std::optional<Mat> witness;  // v with v*v = p, vv* = q
};

/// Murray-von Neumann equivalence decided by block ranks. The witness is the
/// polar part of q x p for a generic x in the algebra.
inline Equivalence mvn_equivalent(const CStarAlg& alg, const BlockStructure& bs, const Mat& p, const Mat& q,
                                  const Tol& tol) {
  if (block_ranks(alg, bs, p, tol) != block_ranks(alg, bs, q, tol)) return {false, std::nullopt};
  Rng rng(tol.rng_seed ^ 0x5bd1e995ULL);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat x = Mat::Zero(alg.ambient_dim(), alg.ambient_dim());
    for (const Mat& b : alg.basis()) x += gaussian_complex(rng) * b;
    Mat v = polar_partial_isometry(q * x * p, tol);
    const double r = std::max((v.adjoint() * v - p).norm(), (v * v.adjoint() - q).norm());
    if (r <= tol.bound(1.0) * 100.0 && alg.contains(v, tol)) return {true, alg.project(v)};
  }
  throw Error(ErrorKind::IsoResidualExceeded, "mvn_equivalent: ranks agree but no witness was found");
}

inline Equivalence mvn_equivalent(const CStarAlg& alg, const Mat& p, const Mat& q, const Tol& tol) {
  return mvn_equivalent(alg, block_structure(alg, tol), p, q, tol);
}

}  // namespace indextwo
