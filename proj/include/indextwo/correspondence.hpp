#pragma once

// F: (B, E) -> X_B and G: X -> (B_X, E_X), with both round trips.
//
// G realizes the linking algebra on the Hilbert space X + A, where
// <xi, eta> = tau(<xi, eta>_A) and tau is the normalized trace of the ambient
// of A. An operator [[a, x], [y~, b]] acts by
//   (xi, c) -> (a.xi + x.c, <y, xi>_A + b c).
// The X block is orthonormalized through the Gram matrix of tau(<., .>_A).

#include <string>
#include <utility>
#include <vector>

#include "basic.hpp"
#include "bimodule.hpp"

namespace indextwo {

inline Bimodule functor_F(const InclusionPair& p, const Tol& tol) {
  Bimodule x = build_XB(crossed_model(p, tol), tol);
  CheckList v = verify_bimodule(x, tol);
  if (!v.all_pass()) {
    std::string failed;
    for (const Check& c : v.checks())
      if (!c.pass) failed += " " + c.name;
    throw Error(ErrorKind::IsoResidualExceeded, "X_B fails bimodule axioms:" + failed);
  }
  return x;
}

struct LinkingData {
  Bimodule module;
  CStarAlg L;
  Mat corner;  // e = [[1, 0], [0, 0]]
  CStarAlg B_X;
  CondExp E_X;
  Mat gram;       // tau(<e_p, e_q>_A)
  Mat gram_sqrt;  // G^(1/2), G^(-1/2)
  Mat gram_inv_sqrt;
  QuasiBasis quasi_basis;  // {(1, 1)} + {(j(w_i), j(y_i))}, w_i = z_i#
  FullnessWitness witness;

  Eigen::Index dim_X() const { return module.dim(); }
  Eigen::Index dim_A() const { return module.coeff().dim(); }
  Eigen::Index size() const { return dim_X() + dim_A(); }

  /// [[a, x], [y~, b]] on X + A in orthonormal coordinates.
  Mat op(const Mat& a, const Vec& x, const Vec& y, const Mat& b) const {
    const CStarAlg& alg = module.coeff();
    const Eigen::Index d = dim_X(), da = dim_A();
    Mat m = Mat::Zero(d + da, d + da);
    m.topLeftCorner(d, d) = module.left_matrix(a);
    for (Eigen::Index k = 0; k < da; ++k) {
      m.block(0, d + k, d, 1) = module.right_tensor()[static_cast<std::size_t>(k)] * x;
      m.block(d, d + k, da, 1) = alg.coords(b * alg.basis()[static_cast<std::size_t>(k)]);
      m.block(d + k, 0, 1, d) = y.adjoint() * module.right_inner_tensor()[static_cast<std::size_t>(k)];
    }
    Mat s = Mat::Identity(d + da, d + da), si = s;
    s.topLeftCorner(d, d) = gram_sqrt;
    si.topLeftCorner(d, d) = gram_inv_sqrt;
    return s * m * si;
  }
  Mat zero_A() const { return Mat::Zero(module.coeff().ambient_dim(), module.coeff().ambient_dim()); }
  Vec zero_X() const { return Vec::Zero(dim_X()); }
  Mat iota(const Mat& a) const { return op(a, zero_X(), zero_X(), a); }
  Mat j(const Vec& x) const { return op(zero_A(), x, module.sharp(x), zero_A()); }
};

/// L as the basic construction of A in B_X, in the shape `check_models_isomorphic` reads.
inline BasicConstruction linking_as_basic(const LinkingData& link, const InclusionPair& p, const Tol& tol) {
  BasicConstruction c;
  c.kind = ModelKind::Crossed;
  c.pair = p;
  c.algebra = link.L;
  c.jones = link.corner;
  c.embed_B = LinearMap::from_function(p.B, link.L, [](const Mat& b) -> Mat { return b; }, tol);
  return c;
}

struct GResult {
  InclusionPair pair;
  LinkingData link;
};

inline GResult functor_G(const Bimodule& x, const Tol& tol) {
  if (!x.has_involution()) throw Error(ErrorKind::InvalidExpectation, "G needs an involutive bimodule");
  const CStarAlg& a = x.coeff();
  const Eigen::Index d = x.dim();
  const auto n = static_cast<double>(a.ambient_dim());

  LinkingData link;
  link.module = x;
  // tau(<e_p, e_q>_A) = sum_k tau(a_k) N_k(p, q)
  link.gram = Mat::Zero(d, d);
  for (Eigen::Index k = 0; k < a.dim(); ++k)
    link.gram += (a.basis()[static_cast<std::size_t>(k)].trace() / n) * x.right_inner_tensor()[static_cast<std::size_t>(k)];
  try {
    link.gram_inv_sqrt = psd_inv_sqrt(link.gram, tol);
  } catch (const Error&) {
    throw Error(ErrorKind::TraceNotFaithful, "tau(<x, x>_A) is degenerate on X");
  }
  link.gram_sqrt = psd_sqrt(link.gram, tol);

  const Eigen::Index size = d + a.dim();
  std::vector<Mat> bx_span, l_span;
  for (const Mat& b : a.basis()) {
    bx_span.push_back(link.iota(b));
    l_span.push_back(link.op(b, link.zero_X(), link.zero_X(), link.zero_A()));
    l_span.push_back(link.op(link.zero_A(), link.zero_X(), link.zero_X(), b));
  }
  for (Eigen::Index p = 0; p < d; ++p) {
    const Vec e = x.basis_vector(p);
    bx_span.push_back(link.j(e));
    l_span.push_back(link.op(link.zero_A(), e, link.zero_X(), link.zero_A()));
    l_span.push_back(link.op(link.zero_A(), link.zero_X(), e, link.zero_A()));
  }
  link.B_X = CStarAlg::from_spanning(size, bx_span, tol);
  link.L = CStarAlg::from_spanning(size, l_span, tol);
  link.corner = link.op(a.unit(), link.zero_X(), link.zero_X(), link.zero_A());

  // E_X keeps the diagonal part: (id + Ad(diag(1, -1))) / 2.
  Mat grading = Mat::Identity(size, size);
  grading.bottomRightCorner(a.dim(), a.dim()) *= -1.0;
  link.E_X = expectation_from_involutive_automorphism(link.B_X, grading, tol);

  LinearMap embed = LinearMap::from_function(a, link.E_X.target, [&](const Mat& b) -> Mat { return link.iota(b); }, tol);
  InclusionPair p = make_inclusion_pair(link.E_X, embed, tol);

  link.witness = fullness_witness(x, tol);
  const Mat one = link.B_X.unit();
  link.quasi_basis.pairs.emplace_back(one, one);
  for (const auto& [z, y] : link.witness.pairs) link.quasi_basis.pairs.emplace_back(link.j(x.sharp(z)), link.j(y));
  link.quasi_basis.index_value = index_of(link.quasi_basis, size);
  const double dev = (link.quasi_basis.index_value - 2.0 * one).norm();
  if (dev > tol.bound(2.0) * 1e3)
    throw IndexNotTwoError(link.quasi_basis.index_value, "Index E_X != 2 (deviation " + std::to_string(dev) + ")");
  return {p, link};
}

/// Structural facts about the linking data of G.
inline CheckList verify_linking(const GResult& g, const Tol& tol) {
  CheckList out;
  const LinkingData& k = g.link;
  const CStarAlg& a = k.module.coeff();
  const double bound = 1e-8;
  out.require("dimension", "dim B_X = dim A + dim X", k.B_X.dim() == k.dim_A() + k.dim_X());
  out.require("L_faithful", "[[a, x], [y~, b]] = 0 only for a = x = y = b = 0", k.L.dim() == 2 * (k.dim_A() + k.dim_X()));

  double jones = 0;
  for (const Mat& b : k.B_X.basis()) jones = std::max(jones, (k.corner * b * k.corner - k.E_X(b) * k.corner).norm());
  out.add("corner_relation", "e b e = E_X(b) e", jones, bound);

  double iso = 0, mult = 0, star = 0;
  for (const Mat& x : a.basis()) {
    iso = std::max(iso, std::abs(op_norm(k.iota(x)) - op_norm(x)));
    star = std::max(star, (k.iota(x.adjoint()) - k.iota(x).adjoint()).norm());
    for (const Mat& y : a.basis()) mult = std::max(mult, (k.iota(x * y) - k.iota(x) * k.iota(y)).norm());
  }
  out.add("iota_isometric", "||diag(a, a)|| = ||a||", iso, bound);
  out.add("iota_multiplicative", "iota(ab) = iota(a) iota(b)", mult, bound);
  out.add("iota_star", "iota(a*) = iota(a)*", star, bound);

  double adj = 0;
  for (Eigen::Index p = 0; p < k.dim_X(); ++p)
    for (Eigen::Index q = 0; q < k.dim_X(); ++q) {
      const Vec u = k.module.basis_vector(p), v = k.module.basis_vector(q);
      for (const Mat& x : a.basis()) {
        const Mat m = k.op(x, u, v, x);
        adj = std::max(adj, (m.adjoint() - k.op(x.adjoint(), v, u, x.adjoint())).norm());
      }
    }
  out.add("L_adjoint", "[[a, x], [y~, b]]* = [[a*, y], [x~, b*]]", adj, bound);

  Rng rng(tol.rng_seed);
  std::vector<Mat> probes;
  for (int s = 0; s < 16; ++s) probes.push_back(random_element(k.B_X, rng));
  auto [right, left] = reconstruction_defect(k.E_X, k.quasi_basis, probes);
  out.add("quasi_basis_right", "b = sum u_i E_X(v_i b)", right, bound);
  out.add("quasi_basis_left", "b = sum E_X(b u_i) v_i", left, bound);
  out.add("fullness_witness", "sum <z_i, y_i>_A = 1", k.witness.residual, bound);
  out.add("index_two", "Index E_X = 2", (k.quasi_basis.index_value - 2.0 * k.B_X.unit()).norm(), bound);

  ModelIso iso_l = check_models_isomorphic(crossed_model(g.pair, tol), linking_as_basic(k, g.pair, tol), tol);
  out.merge(iso_l.checks, "L_is_basic_construction.");
  return out;
}

/// pi: B1 -> B2 is a *-isomorphism fixing the common base algebra and
/// intertwining the expectations.
inline CheckList verify_L_equivalence(const InclusionPair& p1, const InclusionPair& p2, const LinearMap& pi,
                                      const Tol& tol) {
  CheckList out;
  const double bound = 1e-8;
  const bool shapes = pi.domain().dim() == p1.B.dim() && pi.codomain().dim() == p2.B.dim() &&
                      p1.base.dim() == p2.base.dim();
  out.require("shapes", "pi: B1 -> B2 over the same A", shapes);
  if (!shapes) return out;
  out.require("bijective", "pi bijective", p1.B.dim() == p2.B.dim() && pi.rank(tol) == p1.B.dim());
  double mult = 0, star = 0, inter = 0;
  for (const Mat& x : p1.B.basis()) {
    const Mat px = pi(x);
    star = std::max(star, (pi(x.adjoint()) - px.adjoint()).norm());
    inter = std::max(inter, (p2.E(px) - pi(p1.E(x))).norm());
    for (const Mat& y : p1.B.basis()) mult = std::max(mult, (pi(x * y) - px * pi(y)).norm());
  }
  out.add("multiplicative", "pi(xy) = pi(x) pi(y)", mult, bound);
  out.add("star", "pi(x*) = pi(x)*", star, bound);
  out.add("unital", "pi(1) = 1", (pi(p1.B.unit()) - p2.B.unit()).norm(), bound);
  double fix = 0;
  for (const Mat& a : p1.base.basis()) fix = std::max(fix, (pi(p1.embed_base(a)) - p2.embed_base(a)).norm());
  out.add("fixes_A", "pi(a) = a", fix, bound);
  out.add("intertwines", "E2 o pi = pi o E1", inter, bound);
  return out;
}

struct RoundTrip {
  CheckList checks;
  LinearMap pi;  // GF only
  Mat relabel;   // FG only
};

/// (B, E) -> X_B -> (B_{X_B}, E_{X_B}) with pi(b) = iota(E(b)) + j(kappa^-1(b - E(b))).
inline RoundTrip roundtrip_GF(const InclusionPair& p, const Tol& tol) {
  RoundTrip r;
  BasicConstruction c = crossed_model(p, tol);
  Bimodule xb = build_XB(c, tol);
  r.checks.merge(verify_bimodule(xb, tol), "X_B.");
  Bimodule bm = build_Bminus(p, tol);
  BimoduleMap kappa = canonical_XB_to_Bminus(c, xb, bm, tol);
  r.checks.merge(kappa.checks, "X_B_to_B_minus.");
  if (!kappa.checks.passed("bijective")) return r;
  const Mat kinv = kappa.matrix.inverse();
  GResult g = functor_G(xb, tol);
  r.checks.merge(verify_linking(g, tol), "G.");
  r.pi = LinearMap::from_function(
      p.B, g.pair.B,
      [&](const Mat& b) -> Mat {
        const Mat e = p.E(b);
        return g.link.iota(p.to_base(e)) + g.link.j(kinv * bm.coords(b - e));
      },
      tol);
  r.checks.merge(verify_L_equivalence(p, g.pair, r.pi, tol), "pi.");
  return r;
}

/// X -> (B_X, E_X) -> (B_X)_-, relabeled by x -> j(x).
inline RoundTrip roundtrip_FG(const Bimodule& x, const Tol& tol) {
  RoundTrip r;
  r.checks.merge(verify_bimodule(x, tol), "X.");
  GResult g = functor_G(x, tol);
  r.checks.merge(verify_linking(g, tol), "G.");
  Bimodule bm = build_Bminus(g.pair, tol);
  r.relabel = Mat(bm.dim(), x.dim());
  for (Eigen::Index p = 0; p < x.dim(); ++p) r.relabel.col(p) = bm.coords(g.link.j(x.basis_vector(p)));
  r.checks.merge(verify_bimodule_iso(x, bm, r.relabel, true, tol), "relabel.");
  return r;
}

}  // namespace indextwo
