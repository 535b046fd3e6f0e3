#pragma once

// Z_2 crossed products, 2Z-inner systems and their restricted crossed
// product model C = {[[a, x], [alpha(xz), alpha(a)]]}, the three-way
// classification of an index-2 inclusion, and the simplicity conditions.

#include <optional>
#include <string>

#include "correspondence.hpp"

namespace indextwo {

struct TwoZInnerSystem {
  CStarAlg A;
  LinearMap alpha;
  Mat z;
};

inline CheckList validate_two_z_inner(const TwoZInnerSystem& sys, const Tol& tol) {
  return validate_two_z_inner(sys.A, sys.alpha, sys.z, tol);
}

inline Bimodule build_Xalpha(const TwoZInnerSystem& sys, const Tol& tol) {
  return build_Xalpha(sys.A, sys.alpha, sys.z, tol);
}

namespace detail {

inline Mat grading(Eigen::Index n) {
  Mat d = Mat::Identity(2 * n, 2 * n);
  d.bottomRightCorner(n, n) *= -1.0;
  return d;
}

inline Mat two_by_two(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  const Eigen::Index n = a.rows();
  Mat m(2 * n, 2 * n);
  m << a, b, c, d;
  return m;
}

/// The inclusion of {diag(a, sigma(a))} in the span of `span`, with E the even part.
inline InclusionPair graded_pair(const CStarAlg& a, const std::vector<Mat>& span, const LinearMap& sigma,
                                 const Tol& tol) {
  const Eigen::Index n = a.ambient_dim();
  CStarAlg b = CStarAlg::from_spanning(2 * n, span, tol);
  CondExp e = expectation_from_involutive_automorphism(b, grading(n), tol);
  LinearMap embed = LinearMap::from_function(
      a, e.target, [&](const Mat& x) -> Mat { return block_diag(x, sigma(x)); }, tol);
  return make_inclusion_pair(e, embed, tol);
}

}  // namespace detail

/// B = {[[a1, a2], [beta(a2), beta(a1)]]} with A = {diag(a, beta(a))}.
inline InclusionPair crossed_product_z2(const CStarAlg& a, const LinearMap& beta, const Tol& tol) {
  const double inv = involution_defect(beta);
  if (inv > tol.bound(static_cast<double>(a.dim())) * 10.0)
    throw Error(ErrorKind::NotInvolutive, "beta^2 != id (defect " + std::to_string(inv) + ")");
  if (automorphism_defect(beta) > tol.bound(1.0) * 100.0)
    throw Error(ErrorKind::NotAutomorphism, "beta is not a *-automorphism");
  const Mat zero = Mat::Zero(a.ambient_dim(), a.ambient_dim());
  std::vector<Mat> span;
  for (const Mat& x : a.basis()) {
    span.push_back(detail::two_by_two(x, zero, zero, beta(x)));
    span.push_back(detail::two_by_two(zero, x, beta(x), zero));
  }
  return detail::graded_pair(a, span, beta, tol);
}

/// The matrix model C of the restricted crossed product, the pair (B_X, E_X)
/// of X_alpha, and Phi([[a, x], [alpha(xz), alpha(a)]]) = iota(a) + j(x).
struct RestrictedModel {
  InclusionPair pair;
  Bimodule x_alpha;
  GResult g;
  LinearMap phi;
  CheckList checks;
};

inline RestrictedModel restricted_crossed_model(const TwoZInnerSystem& sys, const Tol& tol) {
  CheckList v = validate_two_z_inner(sys, tol);
  if (!v.all_pass()) {
    std::string failed;
    for (const Check& c : v.checks())
      if (!c.pass) failed += " " + c.name;
    throw Error(ErrorKind::NotTwoZInner, "not a 2Z-inner system:" + failed);
  }
  const Eigen::Index n = sys.A.ambient_dim();
  const Mat zero = Mat::Zero(n, n);
  std::vector<Mat> span;
  for (const Mat& x : sys.A.basis()) {
    span.push_back(detail::two_by_two(x, zero, zero, sys.alpha(x)));
    span.push_back(detail::two_by_two(zero, x, sys.alpha(x * sys.z), zero));
  }
  RestrictedModel r{detail::graded_pair(sys.A, span, sys.alpha, tol), build_Xalpha(sys, tol), {}, {}, {}};
  r.g = functor_G(r.x_alpha, tol);
  r.phi = LinearMap::from_function(
      r.pair.B, r.g.pair.B,
      [&](const Mat& c) -> Mat {
        return r.g.link.iota(c.topLeftCorner(n, n)) + r.g.link.j(r.x_alpha.coords(c.topRightCorner(n, n)));
      },
      tol);
  r.checks = verify_L_equivalence(r.pair, r.g.pair, r.phi, tol);
  return r;
}

/// A unitary in B_- found by polar correction of a generic odd element, if any.
inline std::optional<Mat> find_quasi_basis_unitary(const InclusionPair& p, const Tol& tol) {
  Subspace odd = odd_part(p, tol);
  if (odd.dim() == 0) return std::nullopt;
  const Mat& one = p.B.unit();
  const Mat outside = Mat::Identity(one.rows(), one.cols()) - one;
  Rng rng(tol.rng_seed ^ 0x2545F4914F6CDD1DULL);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat x = Mat::Zero(one.rows(), one.cols());
    for (const Mat& m : odd.basis()) x += gaussian_complex(rng) * m;
    const RealVec s = singular_values(x + outside);
    if (s(s.size() - 1) <= tol.cutoff(s(0)) * 1e3) continue;
    Mat u = polar_partial_isometry(x, tol);
    const double r = std::max({(u.adjoint() * u - one).norm(), (u * u.adjoint() - one).norm(), odd.residual(u)});
    if (r <= tol.bound(1.0) * 100.0) return u;
  }
  return std::nullopt;
}

/// {(1, 1), (u, u*)} is a quasi-basis: unitary, E(u) = 0, x = E(x) + u E(u* x) = E(x) + E(x u) u*.
inline CheckList verify_unitary_quasi_basis(const InclusionPair& p, const Mat& u, const Tol& tol) {
  CheckList out;
  const double bound = 1e-8;
  const Mat& one = p.B.unit();
  (void)tol;
  out.add("u_in_B", "u in B", p.B.residual(u), bound);
  out.add("u_unitary", "u u* = u* u = 1", std::max((u * u.adjoint() - one).norm(), (u.adjoint() * u - one).norm()),
          bound);
  out.add("u_odd", "E(u) = 0", p.E(p.B.project(u)).norm(), bound);
  double right = 0, left = 0;
  for (const Mat& x : p.B.basis()) {
    right = std::max(right, (p.E(x) + u * p.E(u.adjoint() * x) - x).norm());
    left = std::max(left, (p.E(x) + p.E(x * u) * u.adjoint() - x).norm());
  }
  out.add("quasi_basis_right", "x = E(x) + u E(u* x)", right, bound);
  out.add("quasi_basis_left", "x = E(x) + E(x u) u*", left, bound);
  return out;
}

struct ClassifyReport {
  Equivalence projections;               // (1) e_A ~ 1 - e_A
  std::optional<Mat> unitary;            // (2) from the witness: v e_A = u e_A
  std::optional<TwoZInnerSystem> system;  // (3) alpha = Ad(u) on A, z = u^2
  std::optional<Mat> direct_unitary;     // independent search in B_-
  CheckList checks;
  bool consistent = false;
};

inline ClassifyReport classify(const InclusionPair& p, const Tol& tol) {
  ClassifyReport r;
  BasicConstruction c = crossed_model(p, tol);
  const Mat e = c.jones, co = c.co_jones();
  r.projections = mvn_equivalent(c.algebra, e, co, tol);
  if (r.projections.equivalent) {
    const Mat& v = *r.projections.witness;
    r.checks.add("witness", "v* v = e_A, v v* = 1 - e_A",
                 std::max((v.adjoint() * v - e).norm(), (v * v.adjoint() - co).norm()), 1e-8);
    const Mat u = reduce_right(c, v, tol);
    r.checks.add("u_reduces_v", "v e_A = u e_A", (v * e - c.embed(u) * e).norm(), 1e-8);
    CheckList qb = verify_unitary_quasi_basis(p, u, tol);
    r.checks.merge(qb);
    if (qb.all_pass()) r.unitary = u;
  }
  if (r.unitary) {
    const Mat& u = *r.unitary;
    const CStarAlg& base = p.base;
    LinearMap alpha = LinearMap::from_function(
        base, base, [&](const Mat& a) -> Mat { return p.to_base(p.A.project(u * p.embed_base(a) * u.adjoint())); },
        tol);
    double leak = 0;
    for (const Mat& a : base.basis()) leak = std::max(leak, p.A.residual(u * p.embed_base(a) * u.adjoint()));
    r.checks.add("alpha_preserves_A", "u A u* = A", leak, 1e-8);
    const Mat u2 = u * u;
    r.checks.add("u_squared_in_A", "u^2 in A", p.A.residual(u2), 1e-8);
    TwoZInnerSystem sys{base, alpha, p.to_base(p.A.project(u2))};
    CheckList tz = validate_two_z_inner(sys, tol);
    r.checks.merge(tz, "two_z_inner.");
    if (tz.all_pass()) {
      // X_alpha ~ B_- through x -> x u
      Bimodule xa = build_Xalpha(sys, tol), bm = build_Bminus(p, tol);
      Mat t(bm.dim(), xa.dim());
      for (Eigen::Index k = 0; k < xa.dim(); ++k)
        t.col(k) = bm.coords(p.embed_base(xa.realize(xa.basis_vector(k))) * u);
      CheckList iso = verify_bimodule_iso(xa, bm, t, true, tol);
      r.checks.merge(iso, "X_alpha_to_B_minus.");
      if (iso.all_pass()) r.system = sys;
    }
  }
  r.direct_unitary = find_quasi_basis_unitary(p, tol);
  if (r.direct_unitary) r.checks.merge(verify_unitary_quasi_basis(p, *r.direct_unitary, tol), "direct.");
  const bool one = r.projections.equivalent, two = r.unitary.has_value(), three = r.system.has_value(),
             direct = r.direct_unitary.has_value();
  r.consistent = one == two && two == three && three == direct && r.checks.all_pass();
  r.checks.require("conditions_agree", "(1) <=> (2) <=> (3)", one == two && two == three);
  r.checks.require("direct_search_agrees", "unitary in B_- exists <=> e_A ~ 1 - e_A", direct == one);
  return r;
}

/// An invertible w in A with alpha(a) w = w a for all a, if one exists.
inline std::optional<Mat> inner_implementer(const TwoZInnerSystem& sys, const Tol& tol) {
  const CStarAlg& a = sys.A;
  const Eigen::Index n = a.ambient_dim(), d = a.dim();
  Mat sys_mat(d * n * n, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Mat& ai = a.basis()[static_cast<std::size_t>(i)];
    const Mat alpha_ai = sys.alpha(ai);
    for (Eigen::Index k = 0; k < d; ++k) {
      const Mat& w = a.basis()[static_cast<std::size_t>(k)];
      sys_mat.block(i * n * n, k, n * n, 1) = vec(alpha_ai * w - w * ai);
    }
  }
  Mat ns = null_space(sys_mat, tol);
  if (ns.cols() == 0) return std::nullopt;
  const Mat outside = Mat::Identity(n, n) - a.unit();
  Rng rng(tol.rng_seed ^ 0x9E3779B97F4A7C15ULL);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Vec c = Vec::Zero(ns.rows());
    for (Eigen::Index k = 0; k < ns.cols(); ++k) c += gaussian_complex(rng) * ns.col(k);
    const Mat w = a.from_coords(c);
    const RealVec s = singular_values(w + outside);
    if (s(s.size() - 1) > tol.cutoff(s(0)) * 1e3) return w;
  }
  return std::nullopt;
}

struct SimplicityReport {
  bool applicable = false;  // A simple
  bool b_simple = false;                // (1) B_X simple
  bool relative_commutant_trivial = false;  // (2) A' n B_X = C1
  bool linking_commutant_trivial = false;   // (3) B_X' n L = C1
  bool outer = false;                       // (4) alpha outer
  Eigen::Index center_dim = 0, relative_commutant_dim = 0, linking_commutant_dim = 0;
  std::optional<Mat> implementer;
  bool consistent = true;
};

inline SimplicityReport simplicity_conditions(const TwoZInnerSystem& sys, const Tol& tol) {
  SimplicityReport r;
  r.applicable = block_structure(sys.A, tol).count() == 1;
  GResult g = functor_G(build_Xalpha(sys, tol), tol);
  r.center_dim = center(g.pair.B, tol).dim();
  r.relative_commutant_dim = commutant(g.pair.A, g.pair.B, tol).dim();
  r.linking_commutant_dim = commutant(g.pair.B, g.link.L, tol).dim();
  r.b_simple = r.center_dim == 1;
  r.relative_commutant_trivial = r.relative_commutant_dim == 1;
  r.linking_commutant_trivial = r.linking_commutant_dim == 1;
  r.implementer = inner_implementer(sys, tol);
  r.outer = !r.implementer.has_value();
  if (r.applicable)
    r.consistent = r.b_simple == r.relative_commutant_trivial && r.relative_commutant_trivial ==
                   r.linking_commutant_trivial && r.linking_commutant_trivial == r.outer;
  return r;
}

struct CommutantDims {
  Eigen::Index relative = 0;  // A' n B
  Eigen::Index dual = 0;      // B' n C*<B, e_A>
  CheckList checks;
};

inline CommutantDims commutant_anti_isomorphism_check(const InclusionPair& p, const Tol& tol) {
  CommutantDims r;
  BasicConstruction c = crossed_model(p, tol);
  std::vector<Mat> images;
  for (const Mat& b : p.B.basis()) images.push_back(c.embed(b));
  CStarAlg b_in_c = CStarAlg::from_spanning(c.algebra.ambient_dim(), images, tol);
  r.relative = commutant(p.A, p.B, tol).dim();
  r.dual = commutant(b_in_c, c.algebra, tol).dim();
  r.checks.require("equal_dimensions", "dim A' n B = dim B' n C*<B, e_A>", r.relative == r.dual);
  return r;
}

}  // namespace indextwo
