#pragma once

// Conditional expectations E: B -> A, quasi-bases, the Watatani index and
// index-2 inclusion pairs with their canonical involution beta = 2E - id.

#include <string>
#include <utility>
#include <vector>

#include "checks.hpp"
#include "cstar.hpp"

namespace indextwo {

enum class ExpectationKind { Involution, Blocks, Matrix };

inline const char* to_string(ExpectationKind k) {
  switch (k) {
    case ExpectationKind::Involution: return "involution";
    case ExpectationKind::Blocks: return "blocks";
    case ExpectationKind::Matrix: return "matrix";
  }
  return "matrix";
}

struct CondExp {
  CStarAlg source;  // B
  CStarAlg target;  // A
  LinearMap action;  // B -> B with range A
  ExpectationKind kind = ExpectationKind::Matrix;
  std::vector<Mat> descriptor;  // unitary w, or the compression projections

  Mat operator()(const Mat& b) const { return action(b); }
};

/// Checks that `beta` is a *-automorphism of its domain; returns the largest
/// defect over basis pairs (multiplicativity, adjoints) and invertibility.
inline double automorphism_defect(const LinearMap& beta) {
  const CStarAlg& b = beta.domain();
  double r = 0.0;
  for (const Mat& x : b.basis()) {
    r = std::max(r, (beta(x.adjoint()) - beta(x).adjoint()).norm());
    for (const Mat& y : b.basis()) r = std::max(r, (beta(x * y) - beta(x) * beta(y)).norm());
  }
  return r;
}

inline double involution_defect(const LinearMap& beta) {
  const Mat sq = beta.matrix() * beta.matrix();
  return (sq - Mat::Identity(sq.rows(), sq.cols())).norm();
}

/// Fixed-point algebra of a linear map on an algebra.
inline CStarAlg fixed_algebra(const LinearMap& map, const Tol& tol) {
  const CStarAlg& b = map.domain();
  Mat ns = null_space(map.matrix() - Mat::Identity(b.dim(), b.dim()), tol);
  std::vector<Mat> span;
  for (Eigen::Index k = 0; k < ns.cols(); ++k) span.push_back(b.from_coords(ns.col(k)));
  return CStarAlg::from_spanning(b.ambient_dim(), span, tol);
}

/// E = (id + beta) / 2 for an order-2 *-automorphism beta of B.
inline CondExp expectation_from_involutive_automorphism(const CStarAlg& b, const LinearMap& beta, const Tol& tol) {
  if (beta.domain().dim() != b.dim() || beta.codomain().dim() != b.dim())
    throw Error(ErrorKind::DimensionMismatch, "automorphism does not act on B");
  const double inv = involution_defect(beta);
  if (inv > tol.bound(static_cast<double>(b.dim())) * 10.0)
    throw Error(ErrorKind::NotInvolutive, "beta^2 != id (defect " + std::to_string(inv) + ")");
  const double aut = automorphism_defect(beta);
  if (aut > tol.bound(1.0) * 100.0)
    throw Error(ErrorKind::NotAutomorphism, "beta is not a *-automorphism (defect " + std::to_string(aut) + ")");
  LinearMap e = LinearMap::identity(b).plus(beta).scaled(0.5);
  return CondExp{b, fixed_algebra(beta, tol), e, ExpectationKind::Involution, {}};
}

inline LinearMap inner_automorphism(const CStarAlg& b, const Mat& w, const Tol& tol) {
  try {
    return LinearMap::from_function(b, b, [&](const Mat& x) -> Mat { return w * x * w.adjoint(); }, tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::NotAutomorphism, std::string("Ad(w) does not preserve B: ") + e.what());
  }
}

inline CondExp expectation_from_involutive_automorphism(const CStarAlg& b, const Mat& w, const Tol& tol) {
  if ((w * w.adjoint() - Mat::Identity(w.rows(), w.cols())).norm() > tol.bound(w.norm()) * 10.0)
    throw Error(ErrorKind::NotAutomorphism, "w is not unitary");
  CondExp e = expectation_from_involutive_automorphism(b, inner_automorphism(b, w, tol), tol);
  e.descriptor = {w};
  return e;
}

/// E(b) = sum_i p_i b p_i for a partition of the unit of B by projections in B.
inline CondExp expectation_from_block_compression(const CStarAlg& b, const std::vector<Mat>& projections,
                                                  const Tol& tol) {
  const Eigen::Index n = b.ambient_dim();
  Mat total = Mat::Zero(n, n);
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const Mat& p = projections[i];
    if (p.rows() != n || p.cols() != n) throw Error(ErrorKind::DimensionMismatch, "projection has wrong shape");
    if (!is_projection(p, tol)) throw Error(ErrorKind::NotPartition, "entry " + std::to_string(i) + " is not a projection");
    if (!b.contains(p, tol)) throw Error(ErrorKind::NotPartition, "entry " + std::to_string(i) + " is not in B");
    for (std::size_t j = 0; j < i; ++j)
      if ((p * projections[j]).norm() > tol.bound(1.0))
        throw Error(ErrorKind::NotPartition, "projections are not mutually orthogonal");
    total += p;
  }
  if ((total - b.unit()).norm() > tol.bound(1.0))
    throw Error(ErrorKind::NotPartition, "projections do not sum to the unit of B");
  auto compress = [&](const Mat& x) -> Mat {
    Mat y = Mat::Zero(n, n);
    for (const Mat& p : projections) y += p * x * p;
    return y;
  };
  LinearMap e = LinearMap::from_function(b, b, compress, tol);
  std::vector<Mat> range;
  for (const Mat& x : b.basis()) range.push_back(compress(x));
  return CondExp{b, CStarAlg::from_spanning(n, range, tol), e, ExpectationKind::Blocks, projections};
}

/// Wraps an arbitrary linear map on B as an expectation candidate; the
/// target is its range.
inline CondExp expectation_from_map(const CStarAlg& b, const LinearMap& map, const Tol& tol) {
  std::vector<Mat> range;
  for (const Mat& x : b.basis()) range.push_back(map(x));
  return CondExp{b, CStarAlg::from_spanning(b.ambient_dim(), range, tol), map, ExpectationKind::Matrix, {}};
}

inline double min_eigenvalue(const Mat& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline Mat random_element(const CStarAlg& a, Rng& rng) {
  Mat x = Mat::Zero(a.ambient_dim(), a.ambient_dim());
  for (const Mat& b : a.basis()) x += gaussian_complex(rng) * b;
  return x;
}

/// Every conditional-expectation axiom with its residual.
inline CheckList validate_expectation(const CondExp& e, const Tol& tol) {
  CheckList out;
  const CStarAlg& b = e.source;
  const CStarAlg& a = e.target;
  const double bound = tol.bound(1.0) * 10.0;

  double contained = 0.0;
  for (const Mat& x : a.basis()) contained = std::max(contained, b.residual(x));
  out.add("target_in_source", "A subset of B", contained, bound);

  out.add("unital", "E(1) = 1", (e(b.unit()) - b.unit()).norm(), bound);

  double fixes = 0.0;
  for (const Mat& x : a.basis()) fixes = std::max(fixes, (e(x) - x).norm());
  out.add("fixes_target", "E(a) = a", fixes, bound);

  double range = 0.0, idem = 0.0, star = 0.0;
  for (const Mat& x : b.basis()) {
    const Mat ex = e(x);
    range = std::max(range, a.residual(ex));
    idem = std::max(idem, (e(ex) - ex).norm());
    star = std::max(star, (e(x.adjoint()) - ex.adjoint()).norm());
  }
  out.add("range_in_target", "E(B) = A", range, bound);
  out.add("idempotent", "E o E = E", idem, bound);
  out.add("self_adjoint", "E(x*) = E(x)*", star, bound);

  double bimod = 0.0;
  for (const Mat& l : a.basis())
    for (const Mat& x : b.basis()) {
      const Mat ex = e(x);
      const Mat lx = l * x;
      for (const Mat& r : a.basis()) bimod = std::max(bimod, (e(lx * r) - l * ex * r).norm());
    }
  out.add("bimodular", "E(a x a') = a E(x) a'", bimod, bound);

  Rng rng(tol.rng_seed ^ 0x1234abcdULL);
  double neg = 0.0;
  auto probe = [&](const Mat& x) { neg = std::max(neg, -min_eigenvalue(e(x.adjoint() * x))); };
  for (const Mat& x : b.basis()) probe(x);
  for (int s = 0; s < tol.sample_count; ++s) probe(random_element(b, rng));
  out.add("positive", "E(x* x) >= 0", std::max(neg, 0.0), bound);
  return out;
}

/// Pairs (u_i, v_i) with b = sum u_i E(v_i b) = sum E(b u_i) v_i.
struct QuasiBasis {
  std::vector<std::pair<Mat, Mat>> pairs;
  Mat index_value;
};

/// Right and left reconstruction residuals over the B basis.
inline std::pair<double, double> reconstruction_defect(const CondExp& e, const QuasiBasis& qb,
                                                       const std::vector<Mat>& probes) {
  double right = 0.0, left = 0.0;
  for (const Mat& b : probes) {
    Mat r = Mat::Zero(b.rows(), b.cols()), l = r;
    for (const auto& [u, v] : qb.pairs) {
      r += u * e(v * b);
      l += e(b * u) * v;
    }
    right = std::max(right, (r - b).norm());
    left = std::max(left, (l - b).norm());
  }
  return {right, left};
}

inline Mat index_of(const QuasiBasis& qb, Eigen::Index n) {
  Mat t = Mat::Zero(n, n);
  for (const auto& [u, v] : qb.pairs) t += u * v;
  return t;
}

/// Frame algorithm: with the scalar product g(x, y) = tr(E(x* y)) / n on B,
/// the frame operator S(b) = sum v_j E(v_j* b) of the seed vectors is
/// g-positive and right A-linear, and w_i = S^{-1/2} v_i is a Parseval frame.
inline QuasiBasis quasi_basis(const CondExp& e, const std::vector<Mat>& seeds, const Tol& tol) {
  const CStarAlg& b = e.source;
  const Eigen::Index d = b.dim();
  const Eigen::Index n = b.ambient_dim();
  const auto tau = [n](const Mat& m) { return m.trace() / static_cast<double>(n); };

  Mat gram(d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = 0; l < d; ++l)
      gram(k, l) = tau(e(b.basis()[static_cast<std::size_t>(k)].adjoint() * b.basis()[static_cast<std::size_t>(l)]));
  Mat t;
  try {
    t = psd_inv_sqrt(gram, tol);  // columns: g-orthonormal basis in B coordinates
  } catch (const Error&) {
    throw Error(ErrorKind::IndexInfinite, "E is not faithful: the A-valued form on B is degenerate");
  }
  const Mat t_inv = t.inverse();

  Mat s(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const Mat fj = b.from_coords(t.col(j));
    Mat sf = Mat::Zero(n, n);
    for (const Mat& v : seeds) sf += v * e(v.adjoint() * fj);
    s.col(j) = t_inv * b.coords(sf);
  }
  Mat root;
  try {
    root = psd_inv_sqrt(0.5 * (s + s.adjoint()), tol);
  } catch (const Error&) {
    throw Error(ErrorKind::IndexInfinite, "frame operator is singular");
  }

  QuasiBasis qb;
  for (const Mat& v : seeds) {
    const Mat w = b.from_coords(t * (root * (t_inv * b.coords(v))));
    qb.pairs.emplace_back(w, w.adjoint());
  }
  qb.index_value = index_of(qb, n);
  auto [right, left] = reconstruction_defect(e, qb, b.basis());
  const double bound = tol.bound(static_cast<double>(d)) * 100.0;
  if (right > bound || left > bound)
    throw Error(ErrorKind::IndexInfinite, "frame reconstruction failed (residual " +
                                              std::to_string(std::max(right, left)) + ")");
  return qb;
}

inline QuasiBasis quasi_basis(const CondExp& e, const Tol& tol) { return quasi_basis(e, e.source.basis(), tol); }

struct IndexResult {
  Mat value;
  QuasiBasis quasi_basis;
  double central_residual = 0.0;  // max ||[Index E, b]|| over the B basis
  double seed_residual = 0.0;     // deviation under a reseeded spanning set
  double reconstruction_residual = 0.0;
};

inline IndexResult watatani_index(const CondExp& e, const Tol& tol) {
  IndexResult r;
  r.quasi_basis = quasi_basis(e, tol);
  r.value = r.quasi_basis.index_value;
  for (const Mat& b : e.source.basis())
    r.central_residual = std::max(r.central_residual, (r.value * b - b * r.value).norm());
  auto [right, left] = reconstruction_defect(e, r.quasi_basis, e.source.basis());
  r.reconstruction_residual = std::max(right, left);

  // A second spanning set: a random invertible recombination of the basis.
  Rng rng(tol.rng_seed ^ 0xa5a5a5a5ULL);
  const Eigen::Index d = e.source.dim();
  Mat mix = random_matrix(d, d, rng);
  std::vector<Mat> seeds;
  for (Eigen::Index j = 0; j < d; ++j) seeds.push_back(e.source.from_coords(mix.col(j)));
  QuasiBasis other = quasi_basis(e, seeds, tol);
  r.seed_residual = (other.index_value - r.value).norm();
  return r;
}

/// Thrown by make_inclusion_pair when the index is not the scalar 2.
class IndexNotTwoError : public Error {
 public:
  IndexNotTwoError(Mat index, const std::string& what) : Error(ErrorKind::IndexNotTwo, what), index_(std::move(index)) {}
  const Mat& index() const { return index_; }

 private:
  Mat index_;
};

/// (B, A, E) with Index E = 2. `base` is the coefficient algebra the pair is
/// built over and `embed_base` its isomorphism onto A; bimodules derived from
/// the pair are over `base`.
struct InclusionPair {
  CStarAlg B;
  CStarAlg A;
  CondExp E;
  QuasiBasis quasi_basis;
  Mat index;
  LinearMap beta;
  CStarAlg base;
  LinearMap embed_base;   // base -> A
  LinearMap to_base;      // A -> base
};

/// Validates E, asserts Index E = 2 and builds beta = 2E - id.
inline InclusionPair make_inclusion_pair(const CondExp& e, const LinearMap& embed_base, const Tol& tol) {
  CheckList v = validate_expectation(e, tol);
  if (!v.all_pass()) {
    std::string failed;
    for (const Check& c : v.checks())
      if (!c.pass) failed += " " + c.name;
    throw Error(ErrorKind::InvalidExpectation, "expectation axioms fail:" + failed);
  }
  IndexResult idx = watatani_index(e, tol);
  const Mat two = 2.0 * e.source.unit();
  const double dev = (idx.value - two).norm();
  if (dev > tol.bound(2.0) * 100.0)
    throw IndexNotTwoError(idx.value, "Index E is not 2 (deviation " + std::to_string(dev) + ")");

  LinearMap beta = e.action.scaled(2.0).plus(LinearMap::identity(e.source).scaled(-1.0));
  const double aut = automorphism_defect(beta);
  const double inv = involution_defect(beta);
  if (aut > tol.bound(1.0) * 100.0 || inv > tol.bound(1.0) * 100.0)
    throw Error(ErrorKind::BetaNotAutomorphism, "2E - id is not an order-2 *-automorphism");
  CStarAlg fixed = fixed_algebra(beta, tol);
  if (!fixed.same_as(e.target, tol))
    throw Error(ErrorKind::BetaNotAutomorphism, "fixed algebra of beta differs from A");

  InclusionPair p{e.source, e.target, e, idx.quasi_basis, idx.value, beta, embed_base.domain(), embed_base,
                  embed_base.inverse(tol)};
  return p;
}

inline InclusionPair make_inclusion_pair(const CondExp& e, const Tol& tol) {
  return make_inclusion_pair(e, LinearMap::identity(e.target), tol);
}

/// Coordinates in `base` of an element of A.
inline Mat to_base(const InclusionPair& p, const Mat& a) { return p.to_base(a); }

/// The (-1)-eigenspace of beta, equivalently ker E.
inline Subspace odd_part(const InclusionPair& p, const Tol& tol) {
  std::vector<Mat> span;
  for (const Mat& b : p.B.basis()) span.push_back(b - p.E(b));
  return Subspace::from_spanning(p.B.ambient_dim(), p.B.ambient_dim(), span, tol);
}

}  // namespace indextwo
