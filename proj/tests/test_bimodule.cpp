#include <gtest/gtest.h>

#include "indextwo/bimodule.hpp"
#include "indextwo/fixtures.hpp"

namespace {

using namespace indextwo;
using namespace indextwo::fixtures;

const Tol kTol;

void expect_all_pass(const CheckList& r, const std::string& what) {
  for (const Check& c : r.checks()) EXPECT_TRUE(c.pass) << what << ": " << c.name << " residual " << c.residual;
}

std::vector<InclusionPair> pairs() {
  std::vector<InclusionPair> out;
  for (auto e : {fix_a(kTol), fix_b(kTol), fix_c(kTol), fix_d(3, kTol), fix_d(5, kTol)})
    out.push_back(make_inclusion_pair(e, kTol));
  return out;
}

Bimodule fix_e_bimodule() {
  CStarAlg m2 = full_matrix_algebra(2, kTol);
  LinearMap alpha = inner_automorphism(m2, diag({1.0, Complex(0, 1)}), kTol);
  return build_Xalpha(m2, alpha, diag({1.0, -1.0}), kTol);
}

TEST(Constructions, CarrierDimensions) {
  const int expected[] = {1, 2, 4};
  int k = 0;
  for (auto e : {fix_a(kTol), fix_b(kTol), fix_c(kTol)}) {
    InclusionPair p = make_inclusion_pair(e, kTol);
    Bimodule xb = build_XB(crossed_model(p, kTol), kTol);
    Bimodule bm = build_Bminus(p, kTol);
    EXPECT_EQ(xb.dim(), expected[k]);
    EXPECT_EQ(bm.dim(), expected[k]);
    EXPECT_EQ(bm.dim(), p.B.dim() - p.A.dim());
    ++k;
  }
}

TEST(Constructions, AllAxiomsHold) {
  for (const InclusionPair& p : pairs()) {
    for (ModelKind kind : {ModelKind::Crossed, ModelKind::QMat}) {
      if (kind == ModelKind::QMat && p.B.ambient_dim() > 3) continue;
      expect_all_pass(verify_bimodule(build_XB(build_basic(p, kind, kTol), kTol), kTol), "X_B");
    }
    expect_all_pass(verify_bimodule(build_Bminus(p, kTol), kTol), "B_-");
  }
  expect_all_pass(verify_bimodule(fix_e_bimodule(), kTol), "X_alpha");
}

TEST(Bminus, FixBInnerProductsByHand) {
  // B_- = span{e12, e21}; E = diagonal part.
  InclusionPair p = make_inclusion_pair(fix_b(kTol), kTol);
  Bimodule bm = build_Bminus(p, kTol);
  Rng rng(3);
  for (int s = 0; s < 10; ++s) {
    const Complex u = gaussian_complex(rng), v = gaussian_complex(rng), w = gaussian_complex(rng), t = gaussian_complex(rng);
    Mat x = u * unit(2, 0, 1) + v * unit(2, 1, 0), y = w * unit(2, 0, 1) + t * unit(2, 1, 0);
    Vec cx = bm.coords(x), cy = bm.coords(y);
    // x y* = diag(u conj w, v conj t); x* y = diag(conj v t, conj u w)
    EXPECT_LT(dist(bm.left_inner(cx, cy), diag({u * std::conj(w), v * std::conj(t)})), 1e-12);
    EXPECT_LT(dist(bm.right_inner(cx, cy), diag({std::conj(v) * t, std::conj(u) * w})), 1e-12);
    EXPECT_LT(dist(bm.realize(bm.sharp(cx)), x.adjoint()), 1e-12);
  }
}

TEST(Bminus, FixCFullness) {
  InclusionPair p = make_inclusion_pair(fix_c(kTol), kTol);
  Bimodule bm = build_Bminus(p, kTol);
  FullnessWitness w = fullness_witness(bm, kTol);
  EXPECT_LT(w.residual, 1e-9);
  Mat sum = zeros(3, 3);
  for (const auto& [z, y] : w.pairs) sum += bm.right_inner(z, y);
  EXPECT_LT(dist(sum, identity(3)), 1e-9);
}

TEST(Mutation, LinearSharpBreaksTwistAxiom) {
  InclusionPair p = make_inclusion_pair(fix_b(kTol), kTol);
  Bimodule xb = build_XB(crossed_model(p, kTol), kTol);
  CheckList r = verify_bimodule(xb.with_sharp(identity(xb.dim()), false), kTol);
  EXPECT_FALSE(r.passed("sharp_twists_actions"));
  EXPECT_FALSE(r.all_pass());
}

TEST(Mutation, ZeroBimoduleIsNotFull) {
  CStarAlg c = full_matrix_algebra(1, kTol);
  Bimodule zero = Bimodule::from_tensors("0", c, {zeros(0, 0)}, {zeros(0, 0)}, {zeros(0, 0)}, {zeros(0, 0)}, std::nullopt);
  CheckList r = verify_bimodule(zero, kTol);
  EXPECT_FALSE(r.passed("left_full"));
  EXPECT_FALSE(r.passed("right_full"));
}

TEST(Dual, StructureAndDoubleDual) {
  for (const InclusionPair& p : pairs()) {
    Bimodule x = build_Bminus(p, kTol);
    Bimodule dx = dual(x);
    expect_all_pass(verify_bimodule(dx, kTol), "dual");
    Bimodule ddx = dual(dx);
    for (std::size_t k = 0; k < x.left_tensor().size(); ++k) {
      EXPECT_LT((ddx.left_tensor()[k] - x.left_tensor()[k]).norm(), 1e-12);
      EXPECT_LT((ddx.right_tensor()[k] - x.right_tensor()[k]).norm(), 1e-12);
    }
    // A<x~, y~> = <x, y>_A on basis pairs, with x~ = conj(c(x))
    for (Eigen::Index i = 0; i < x.dim(); ++i)
      for (Eigen::Index j = 0; j < x.dim(); ++j) {
        const Vec u = x.basis_vector(i), v = x.basis_vector(j);
        EXPECT_LT(dist(dx.left_inner(u.conjugate(), v.conjugate()), x.right_inner(u, v)), 1e-12);
        EXPECT_LT(dist(dx.right_inner(u.conjugate(), v.conjugate()), x.left_inner(u, v)), 1e-12);
      }
    // lambda x~ = (conj(lambda) x)~ for lambda = i
    const Complex i(0, 1);
    const Vec u = x.basis_vector(0);
    EXPECT_LT((i * Vec(u.conjugate()) - Vec((std::conj(i) * u).conjugate())).norm(), 1e-15);
  }
}

TEST(V, IsABimoduleIsomorphismOntoTheDual) {
  for (const InclusionPair& p : pairs()) {
    Bimodule x = build_XB(crossed_model(p, kTol), kTol);
    Mat v = V_map(x);
    expect_all_pass(verify_bimodule_iso(x, dual(x), v, false, kTol), "V");
    // V composed with itself through the double dual is the identity.
    EXPECT_LT((v * v.conjugate() - identity(x.dim())).norm(), 1e-9);
  }
}

TEST(V, TrivialBimodule) {
  // X = A over itself, x# = x*: V(a) = (a*)~, V(1) = 1~.
  CStarAlg m2 = full_matrix_algebra(2, kTol);
  Bimodule x = build_Xalpha(m2, LinearMap::identity(m2), identity(2), kTol);
  Vec one = x.coords(identity(2));
  EXPECT_LT((V_map(x) * one - one.conjugate()).norm(), 1e-12);
  Mat a(2, 2);
  a << 1.0, Complex(2, 1), 3.0, Complex(0, -1);
  EXPECT_LT((V_map(x) * x.coords(a) - x.coords(a.adjoint()).conjugate()).norm(), 1e-12);
}

TEST(Canonical, XBToBminusIsInvolutiveIso) {
  for (const InclusionPair& p : pairs()) {
    BasicConstruction c = crossed_model(p, kTol);
    Bimodule xb = build_XB(c, kTol), bm = build_Bminus(p, kTol);
    BimoduleMap m = canonical_XB_to_Bminus(c, xb, bm, kTol);
    expect_all_pass(m.checks, "canonical");
    // image of x# is (image of x)*
    for (Eigen::Index k = 0; k < xb.dim(); ++k) {
      const Vec u = xb.basis_vector(k);
      EXPECT_LT(dist(bm.realize(m.matrix * xb.sharp(u)), bm.realize(m.matrix * u).adjoint()), 1e-9);
    }
  }
}

TEST(Xalpha, Examples) {
  Bimodule fe = fix_e_bimodule();
  for (Eigen::Index k = 0; k < fe.dim(); ++k)
    EXPECT_LT((fe.sharp(fe.sharp(fe.basis_vector(k))) - fe.basis_vector(k)).norm(), 1e-12);
  // alpha = id, z = 1: x# = x*
  CStarAlg m2 = full_matrix_algebra(2, kTol);
  Bimodule triv = build_Xalpha(m2, LinearMap::identity(m2), identity(2), kTol);
  Mat a(2, 2);
  a << 1.0, Complex(0, 2), 5.0, -1.0;
  EXPECT_LT(dist(triv.realize(triv.sharp(triv.coords(a))), a.adjoint()), 1e-12);
  // D_2 with the coordinate swap, z = 1: right action twisted by the swap
  CStarAlg d2 = diagonal_algebra(2, kTol);
  LinearMap swap = inner_automorphism(d2, flip2(), kTol);
  Bimodule xs = build_Xalpha(d2, swap, identity(2), kTol);
  expect_all_pass(verify_bimodule(xs, kTol), "swap");
  Vec one = xs.coords(identity(2));
  EXPECT_LT(dist(xs.realize(xs.act_right(one, diag({1.0, 0.0}))), diag({0.0, 1.0})), 1e-12);
}

TEST(Xalpha, RejectsNonInnerSquare) {
  CStarAlg m2 = full_matrix_algebra(2, kTol);
  LinearMap alpha = inner_automorphism(m2, diag({1.0, Complex(0, 1)}), kTol);
  try {
    build_Xalpha(m2, alpha, identity(2), kTol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTwoZInner);
  }
}

}  // namespace
