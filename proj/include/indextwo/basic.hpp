#pragma once

// The C*-basic construction C*<B, e_A> of an index-2 inclusion in two
// concrete models:
//
//   crossed: B x|_beta Z_2 inside M_2(M_n). b -> diag(b, beta(b)),
//            W = [[0, 1], [1, 0]], e_A = (1 + W) / 2, flip = Ad(diag(1, -1)).
//   qmat:    q M_m(A) q for the frame quasi-basis {(x_i, x_i*)}:
//            q = [E(x_i* x_j)], b -> [E(x_i* b x_j)], e_A -> [E(x_i*) E(x_j)].
//
// The models are built independently and compared by `models_isomorphic`.

#include <string>
#include <vector>

#include "checks.hpp"
#include "inclusion.hpp"

namespace indextwo {

enum class ModelKind { Crossed, QMat };

inline const char* to_string(ModelKind k) { return k == ModelKind::Crossed ? "crossed" : "qmat"; }

struct BasicConstruction {
  ModelKind kind = ModelKind::Crossed;
  InclusionPair pair;
  CStarAlg algebra;
  Mat jones;                   // e_A
  LinearMap embed_B;           // B -> algebra
  LinearMap dual_expectation;  // algebra -> B, E~(a e_A b) = ab / 2
  LinearMap flip;              // beta^: fixes B, swaps e_A and 1 - e_A
  Mat unitary_U;               // 2 e_A - 1
  Mat q;                       // qmat only: the projection [E(x_i* x_j)]

  const Mat& one() const { return algebra.unit(); }
  Mat co_jones() const { return algebra.unit() - jones; }
  Mat embed(const Mat& b) const { return embed_B(b); }
};

/// The generating family {b_k} and {b_k e_A b_l} of C*<B, e_A>.
inline std::vector<Mat> generating_words(const LinearMap& embed, const Mat& e, const std::vector<Mat>& b_basis) {
  std::vector<Mat> words;
  std::vector<Mat> images;
  for (const Mat& b : b_basis) images.push_back(embed(b));
  for (const Mat& x : images) words.push_back(x);
  for (const Mat& x : images)
    for (const Mat& y : images) words.push_back(x * e * y);
  return words;
}

inline BasicConstruction crossed_model(const InclusionPair& p, const Tol& tol) {
  const Eigen::Index n = p.B.ambient_dim();
  const Mat& u = p.B.unit();
  auto emb = [&](const Mat& b) -> Mat { return block_diag(b, p.beta(b)); };
  Mat w = Mat::Zero(2 * n, 2 * n);
  w.topRightCorner(n, n) = u;
  w.bottomLeftCorner(n, n) = u;

  std::vector<Mat> span;
  for (const Mat& b : p.B.basis()) {
    span.push_back(emb(b));
    span.push_back(emb(b) * w);
  }
  BasicConstruction c;
  c.kind = ModelKind::Crossed;
  c.pair = p;
  c.algebra = CStarAlg::from_spanning(2 * n, span, tol);
  c.embed_B = LinearMap::from_function(p.B, c.algebra, emb, tol);
  c.jones = 0.5 * (emb(u) + w);
  c.unitary_U = w;
  // b1 + b2 W = [[b1, b2], [beta(b2), beta(b1)]]; the dual expectation keeps b1.
  c.dual_expectation = LinearMap::from_function(
      c.algebra, p.B, [n](const Mat& x) -> Mat { return x.topLeftCorner(n, n); }, tol);
  const Mat d = block_diag(Mat::Identity(n, n), -Mat::Identity(n, n));
  c.flip = LinearMap::from_function(c.algebra, c.algebra, [&](const Mat& x) -> Mat { return d * x * d; }, tol);
  return c;
}

inline BasicConstruction q_model(const InclusionPair& p, const Tol& tol) {
  const auto& qb = p.quasi_basis.pairs;
  const auto m = static_cast<Eigen::Index>(qb.size());
  const Eigen::Index n = p.B.ambient_dim();
  for (const auto& [x, y] : qb)
    if ((y - x.adjoint()).norm() > tol.bound(x.norm()))
      throw Error(ErrorKind::QNotProjection, "q-model needs a quasi-basis of the form (x_i, x_i*)");

  auto blocks = [&](auto&& entry) -> Mat {
    Mat out(m * n, m * n);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) out.block(i * n, j * n, n, n) = entry(i, j);
    return out;
  };
  auto x = [&](Eigen::Index i) -> const Mat& { return qb[static_cast<std::size_t>(i)].first; };
  const Mat q = blocks([&](Eigen::Index i, Eigen::Index j) { return p.E(x(i).adjoint() * x(j)); });
  if (projection_defect(q) > tol.bound(q.norm()) * 100.0)
    throw Error(ErrorKind::QNotProjection, "q = [E(x_i* x_j)] is not a projection (defect " +
                                               std::to_string(projection_defect(q)) + ")");
  auto emb = [&](const Mat& b) -> Mat {
    return blocks([&](Eigen::Index i, Eigen::Index j) { return p.E(x(i).adjoint() * b * x(j)); });
  };
  const Mat e = blocks([&](Eigen::Index i, Eigen::Index j) { return Mat(p.E(x(i).adjoint()) * p.E(x(j))); });

  std::vector<Mat> b_images;
  for (const Mat& b : p.B.basis()) b_images.push_back(emb(b));
  std::vector<Mat> span = b_images;
  std::vector<Mat> words_tilde;
  std::vector<Mat> words_flip;
  for (std::size_t k = 0; k < b_images.size(); ++k)
    for (std::size_t l = 0; l < b_images.size(); ++l) {
      span.push_back(b_images[k] * e * b_images[l]);
      words_tilde.push_back(0.5 * p.B.basis()[k] * p.B.basis()[l]);
      words_flip.push_back(b_images[k] * (q - e) * b_images[l]);
    }

  BasicConstruction c;
  c.kind = ModelKind::QMat;
  c.pair = p;
  c.algebra = CStarAlg::from_spanning(m * n, span, tol);
  c.embed_B = LinearMap::from_function(p.B, c.algebra, emb, tol);
  c.jones = e;
  c.q = q;
  c.unitary_U = 2.0 * e - c.algebra.unit();

  std::vector<Mat> tilde_images(p.B.basis());
  tilde_images.insert(tilde_images.end(), words_tilde.begin(), words_tilde.end());
  auto [tilde, tilde_res] = solve_linear_map(c.algebra, span, p.B, tilde_images);
  std::vector<Mat> flip_images(b_images);
  flip_images.insert(flip_images.end(), words_flip.begin(), words_flip.end());
  auto [flip, flip_res] = solve_linear_map(c.algebra, span, c.algebra, flip_images);
  if (tilde_res > tol.bound(1.0) * 1e3 || flip_res > tol.bound(1.0) * 1e3)
    throw Error(ErrorKind::IsoResidualExceeded, "q-model: dual expectation or flip is inconsistent");
  c.dual_expectation = tilde;
  c.flip = flip;
  return c;
}

inline BasicConstruction build_basic(const InclusionPair& p, ModelKind kind, const Tol& tol) {
  return kind == ModelKind::Crossed ? crossed_model(p, tol) : q_model(p, tol);
}

/// Every structural invariant of a basic construction.
inline CheckList verify_basic(const BasicConstruction& c, const Tol& tol) {
  CheckList out;
  const InclusionPair& p = c.pair;
  const Mat& e = c.jones;
  const Mat& one = c.one();
  const Mat& uu = c.unitary_U;
  const double bound = tol.bound(1.0) * 10.0;

  out.add("jones_projection", "e_A = e_A* = e_A^2", projection_defect(e), bound);
  out.add("jones_in_algebra", "e_A in C*<B, e_A>", c.algebra.residual(e), bound);

  double jones = 0.0, conj = 0.0, tilde = 0.0, flip_fix = 0.0, cut = 0.0;
  for (const Mat& b : p.B.basis()) {
    const Mat eb = c.embed(b);
    const Mat ee = c.embed(p.E(b));
    jones = std::max(jones, (e * eb * e - ee * e).norm());
    conj = std::max(conj, (uu * eb * uu.adjoint() - c.embed(2.0 * p.E(b) - b)).norm());
    tilde = std::max(tilde, (c.dual_expectation(eb) - b).norm());
    flip_fix = std::max(flip_fix, (c.flip(eb) - eb).norm());
    cut = std::max(cut, ((one - e) * eb * (one - e) - ee * (one - e)).norm());
  }
  out.add("jones_relation", "e_A b e_A = E(b) e_A", jones, bound);
  out.add("U_squared", "U^2 = 1", (uu * uu - one).norm(), bound);
  out.add("U_unitary", "U U* = 1", (uu * uu.adjoint() - one).norm(), bound);
  out.add("U_implements_beta", "U b U* = 2E(b) - b", conj, bound);
  out.add("cut_down", "(1-e_A) b (1-e_A) = E(b)(1-e_A)", cut, bound);
  out.add("dual_expectation_on_B", "E~(b) = b", tilde, bound);
  out.add("dual_expectation_jones", "E~(e_A) = 1/2", (c.dual_expectation(e) - 0.5 * p.B.unit()).norm(), bound);

  double tilde_words = 0.0;
  for (const Mat& a : p.B.basis())
    for (const Mat& b : p.B.basis())
      tilde_words = std::max(tilde_words, (c.dual_expectation(c.embed(a) * e * c.embed(b)) - 0.5 * a * b).norm());
  out.add("dual_expectation_words", "E~(a e_A b) = ab/2", tilde_words, bound);

  const Mat flip_sq = c.flip.matrix() * c.flip.matrix();
  out.add("flip_order_two", "beta^^2 = id", (flip_sq - Mat::Identity(flip_sq.rows(), flip_sq.cols())).norm(), bound);
  out.add("flip_swaps_jones", "beta^(e_A) = 1 - e_A", (c.flip(e) - (one - e)).norm(), bound);
  out.add("flip_fixes_B", "beta^(b) = b", flip_fix, bound);
  out.add("flip_automorphism", "beta^ is a *-automorphism", automorphism_defect(c.flip), bound * 10.0);

  CStarAlg generated =
      CStarAlg::from_spanning(c.algebra.ambient_dim(), generating_words(c.embed_B, e, p.B.basis()), tol);
  out.require("generated_by_B_and_jones", "C*<B, e_A> = span B e_A B + B",
              generated.same_as(c.algebra, tol));
  if (c.kind == ModelKind::QMat) {
    // every element sits in q M_m(A) q
    const Eigen::Index n = p.B.ambient_dim();
    const Eigen::Index m = c.q.rows() / n;
    double corner = 0.0, entries = 0.0;
    for (const Mat& x : c.algebra.basis()) {
      corner = std::max(corner, (c.q * x * c.q - x).norm());
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) entries = std::max(entries, p.A.residual(x.block(i * n, j * n, n, n)));
    }
    out.add("q_corner", "x = q x q", corner, bound);
    out.add("entries_in_A", "x in M_m(A)", entries, bound);
    out.add("q_is_unit", "1 = q", (c.one() - c.q).norm(), bound);
  }
  if (c.kind == ModelKind::Crossed)
    out.require("graded_dimension", "dim C*<B, e_A> = 2 dim B", c.algebra.dim() == 2 * p.B.dim());
  return out;
}

/// The *-isomorphism of two models fixing B and e_A, resolved on the
/// generating words; `checks` carries well-definedness and homomorphism residuals.
struct ModelIso {
  LinearMap map;
  CheckList checks;
};

inline ModelIso check_models_isomorphic(const BasicConstruction& c1, const BasicConstruction& c2, const Tol& tol) {
  const std::vector<Mat>& bb = c1.pair.B.basis();
  std::vector<Mat> src = generating_words(c1.embed_B, c1.jones, bb);
  std::vector<Mat> dst = generating_words(c2.embed_B, c2.jones, bb);
  auto [map, consistency] = solve_linear_map(c1.algebra, src, c2.algebra, dst);
  ModelIso iso{map, {}};
  const double bound = 1e-8;
  iso.checks.add("well_defined", "kappa(b) = b, kappa(e_A) = e_A", consistency, bound);
  iso.checks.require("dimensions", "dim C1 = dim C2", c1.algebra.dim() == c2.algebra.dim());
  iso.checks.require("bijective", "kappa bijective", map.rank(tol) == c2.algebra.dim() &&
                                                         c1.algebra.dim() == c2.algebra.dim());
  double mult = 0.0, star = 0.0;
  for (const Mat& x : c1.algebra.basis()) {
    const Mat fx = map(x);
    star = std::max(star, (map(x.adjoint()) - fx.adjoint()).norm());
    for (const Mat& y : c1.algebra.basis()) mult = std::max(mult, (map(x * y) - fx * map(y)).norm());
  }
  iso.checks.add("multiplicative", "kappa(xy) = kappa(x) kappa(y)", mult, bound);
  iso.checks.add("star", "kappa(x*) = kappa(x)*", star, bound);
  iso.checks.add("unital", "kappa(1) = 1", (map(c1.one()) - c2.one()).norm(), bound);
  iso.checks.add("jones", "kappa(e_A) = e_A", (map(c1.jones) - c2.jones).norm(), bound);
  return iso;
}

inline LinearMap models_isomorphic(const BasicConstruction& c1, const BasicConstruction& c2, const Tol& tol) {
  ModelIso iso = check_models_isomorphic(c1, c2, tol);
  if (!iso.checks.all_pass())
    throw Error(ErrorKind::IsoResidualExceeded, "basic construction models are not isomorphic");
  return iso.map;
}

inline void require_member(const BasicConstruction& c, const Mat& x, const Tol& tol) {
  if (x.rows() != c.algebra.ambient_dim() || !c.algebra.contains(x, tol))
    throw Error(ErrorKind::NotInAlgebra, "element is not in the basic construction");
}

inline Mat dual_expectation_apply(const BasicConstruction& c, const Mat& x, const Tol& tol) {
  require_member(c, x, tol);
  return c.dual_expectation(x);
}

/// F(y) = t/(t-1) E(E~(y)) (1 - e_A) on the corner (1-e_A) C (1-e_A), with
/// its quasi-basis built from the quasi-basis of E.
struct CutExpectation {
  CStarAlg corner;
  CStarAlg target;  // A (1 - e_A)
  LinearMap map;
  QuasiBasis quasi_basis;
  Mat index;
  CheckList checks;
};

inline CutExpectation cut_expectation_F(const BasicConstruction& c, const Tol& tol) {
  const InclusionPair& p = c.pair;
  const Mat co = c.co_jones();
  const Eigen::Index n = c.algebra.ambient_dim();
  constexpr double t = 2.0;

  std::vector<Mat> corner_span, target_span;
  for (const Mat& x : c.algebra.basis()) corner_span.push_back(co * x * co);
  for (const Mat& a : p.A.basis()) target_span.push_back(c.embed(a) * co);
  CutExpectation f;
  f.corner = CStarAlg::from_spanning(n, corner_span, tol);
  f.target = CStarAlg::from_spanning(n, target_span, tol);
  auto apply = [&](const Mat& y) -> Mat { return t / (t - 1.0) * c.embed(p.E(c.dual_expectation(y))) * co; };
  f.map = LinearMap::from_function(f.corner, f.corner, apply, tol);

  const double scale = std::sqrt(t - 1.0);
  for (const auto& [xi, xi_star] : p.quasi_basis.pairs)
    for (const auto& [xj, xj_star] : p.quasi_basis.pairs) {
      (void)xi_star;
      (void)xj_star;
      Mat u = scale * co * c.embed(xj) * c.jones * c.embed(xi) * co;
      f.quasi_basis.pairs.emplace_back(u, u.adjoint());
    }
  f.index = index_of(f.quasi_basis, n);
  f.quasi_basis.index_value = f.index;

  double right = 0.0, left = 0.0;
  for (const Mat& y : f.corner.basis()) {
    Mat r = Mat::Zero(n, n), l = Mat::Zero(n, n);
    for (const auto& [u, v] : f.quasi_basis.pairs) {
      r += u * f.map(v * y);
      l += f.map(y * u) * v;
    }
    right = std::max(right, (r - y).norm());
    left = std::max(left, (l - y).norm());
  }
  const double bound = 1e-8;
  f.checks.add("F_quasi_basis_right", "y = sum u F(u* y)", right, bound);
  f.checks.add("F_quasi_basis_left", "y = sum F(y u) u*", left, bound);
  f.checks.add("F_index", "Index F = (t-1)^2 (1-e_A)", (f.index - (t - 1.0) * (t - 1.0) * co).norm(), bound);
  f.checks.add("F_unital", "F(1-e_A) = 1-e_A", (f.map(co) - co).norm(), bound);
  double on_b = 0.0, range = 0.0;
  for (const Mat& b : p.B.basis()) {
    const Mat ee = c.embed(p.E(b)) * co;
    on_b = std::max(on_b, (f.map(co * c.embed(b) * co) - ee).norm());
  }
  for (const Mat& y : f.corner.basis()) range = std::max(range, f.target.residual(f.map(y)));
  f.checks.add("F_on_B", "F((1-e_A) b (1-e_A)) = E(b)(1-e_A)", on_b, bound);
  f.checks.add("F_range", "F onto A(1-e_A)", range, bound);
  return f;
}

/// (1-e_A) C (1-e_A) = A (1-e_A) and e_A C e_A = A e_A, with a -> a(1-e_A) injective.
inline CheckList corner_is_A(const BasicConstruction& c, const Tol& tol) {
  CheckList out;
  const InclusionPair& p = c.pair;
  const Mat co = c.co_jones();
  const Eigen::Index n = c.algebra.ambient_dim();
  std::vector<Mat> lower, upper;
  for (const Mat& a : p.A.basis()) {
    lower.push_back(c.embed(a) * co);
    upper.push_back(c.embed(a) * c.jones);
  }
  Subspace a_co = Subspace::from_spanning(n, n, lower, tol);
  Subspace a_e = Subspace::from_spanning(n, n, upper, tol);
  double r_co = 0.0, r_e = 0.0;
  for (const Mat& x : c.algebra.basis()) {
    r_co = std::max(r_co, a_co.residual(co * x * co));
    r_e = std::max(r_e, a_e.residual(c.jones * x * c.jones));
  }
  const double bound = tol.bound(1.0) * 10.0;
  out.add("co_corner_is_A", "(1-e_A) C (1-e_A) = A(1-e_A)", r_co, bound);
  out.add("jones_corner_is_A", "e_A C e_A = A e_A", r_e, bound);
  out.require("co_corner_injective", "a(1-e_A) = 0 => a = 0", a_co.dim() == p.A.dim());
  out.require("jones_corner_injective", "a e_A = 0 => a = 0", a_e.dim() == p.A.dim());
  double recover = 0.0;
  for (const Mat& a : p.A.basis()) recover = std::max(recover, (2.0 * c.dual_expectation(c.embed(a) * co) - a).norm());
  out.add("co_corner_inverse", "a = 2 E~(a(1-e_A))", recover, bound);
  return out;
}

struct FlipFixedPoints {
  CStarAlg fixed;
  CheckList checks;
};

inline FlipFixedPoints fixed_points_of_flip(const BasicConstruction& c, const Tol& tol) {
  FlipFixedPoints r{fixed_algebra(c.flip, tol), {}};
  r.checks.require("fixed_dimension", "dim C^beta^ = dim B", r.fixed.dim() == c.pair.B.dim());
  double b_in_fixed = 0.0, fixed_in_b = 0.0;
  std::vector<Mat> images;
  for (const Mat& b : c.pair.B.basis()) {
    images.push_back(c.embed(b));
    b_in_fixed = std::max(b_in_fixed, r.fixed.residual(images.back()));
  }
  Subspace emb = Subspace::from_spanning(c.algebra.ambient_dim(), c.algebra.ambient_dim(), images, tol);
  for (const Mat& x : r.fixed.basis()) fixed_in_b = std::max(fixed_in_b, emb.residual(x));
  const double bound = tol.bound(1.0) * 10.0;
  r.checks.add("B_in_fixed", "B subset of C^beta^", b_in_fixed, bound);
  r.checks.add("fixed_in_B", "C^beta^ subset of B", fixed_in_b, bound);
  return r;
}

/// The unique b in B with e_A x = e_A b, namely b = 2 E~(e_A x).
inline Mat reduce_left(const BasicConstruction& c, const Mat& x, const Tol& tol) {
  require_member(c, x, tol);
  const Mat b = 2.0 * c.dual_expectation(c.jones * x);
  const double r = (c.jones * x - c.jones * c.embed(b)).norm();
  if (r > tol.bound(x.norm()) * 100.0)
    throw Error(ErrorKind::IsoResidualExceeded, "e_A x != e_A b (residual " + std::to_string(r) + ")");
  return b;
}

/// The unique b in B with x e_A = b e_A.
inline Mat reduce_right(const BasicConstruction& c, const Mat& x, const Tol& tol) {
  return reduce_left(c, x.adjoint(), tol).adjoint();
}

/// b -> e_A b is injective on B, which makes reduce_left well defined.
inline bool reduction_unique(const BasicConstruction& c, const Tol& tol) {
  std::vector<Mat> images;
  for (const Mat& b : c.pair.B.basis()) images.push_back(c.jones * c.embed(b));
  const Eigen::Index n = c.algebra.ambient_dim();
  return Subspace::from_spanning(n, n, images, tol).dim() == c.pair.B.dim();
}

}  // namespace indextwo
