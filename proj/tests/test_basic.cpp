#include <gtest/gtest.h>

#include "indextwo/basic.hpp"
#include "indextwo/fixtures.hpp"

namespace {

using namespace indextwo;
using namespace indextwo::fixtures;

const Tol kTol;

std::vector<InclusionPair> pairs() {
  std::vector<InclusionPair> out;
  for (auto e : {fix_a(kTol), fix_b(kTol), fix_c(kTol), fix_d(3, kTol)}) out.push_back(make_inclusion_pair(e, kTol));
  return out;
}

void expect_all_pass(const CheckList& r, const std::string& what) {
  for (const Check& c : r.checks()) EXPECT_TRUE(c.pass) << what << ": " << c.name << " residual " << c.residual;
}

TEST(Crossed, FixBByHand) {
  InclusionPair p = make_inclusion_pair(fix_b(kTol), kTol);
  BasicConstruction c = crossed_model(p, kTol);
  EXPECT_EQ(c.algebra.dim(), 8);
  Mat e(4, 4);
  e << 1, 0, 1, 0,  //
      0, 1, 0, 1,   //
      1, 0, 1, 0,   //
      0, 1, 0, 1;
  EXPECT_LT(dist(c.jones, 0.5 * e), 1e-12);
  // b = [[p, r], [s, t]] -> diag(b, [[p, -r], [-s, t]])
  Mat b(2, 2);
  b << 1.0, 2.0, Complex(0, 3), 4.0;
  Mat bb(2, 2);
  bb << 1.0, -2.0, Complex(0, -3), 4.0;
  EXPECT_LT(dist(c.embed(b), block_diag(b, bb)), 1e-12);
  // e b e = diag(1, 4) e
  EXPECT_LT(dist(c.jones * c.embed(b) * c.jones, c.embed(diag({1.0, 4.0})) * c.jones), 1e-12);
}

TEST(Models, InvariantsHoldInBothModels) {
  for (const InclusionPair& p : pairs())
    for (ModelKind k : {ModelKind::Crossed, ModelKind::QMat}) {
      BasicConstruction c = build_basic(p, k, kTol);
      expect_all_pass(verify_basic(c, kTol), to_string(k));
      EXPECT_EQ(c.algebra.dim(), 2 * p.B.dim());
    }
}

TEST(Models, CrossedAndQMatAreIsomorphic) {
  for (const InclusionPair& p : pairs()) {
    BasicConstruction a = crossed_model(p, kTol), b = q_model(p, kTol);
    ModelIso iso = check_models_isomorphic(a, b, kTol);
    expect_all_pass(iso.checks, "iso");
    EXPECT_LT(iso.checks.max_residual(), 1e-8);
    ModelIso back = check_models_isomorphic(b, a, kTol);
    EXPECT_LT((back.map.matrix() * iso.map.matrix() - identity(a.algebra.dim())).norm(), 1e-8);
  }
}

TEST(Models, RandomWordsObeyDualExpectation) {
  InclusionPair p = make_inclusion_pair(fix_c(kTol), kTol);
  BasicConstruction c = q_model(p, kTol);
  Rng rng(5);
  for (int s = 0; s < 50; ++s) {
    Mat a = random_element(p.B, rng), b = random_element(p.B, rng);
    EXPECT_LT(dist(dual_expectation_apply(c, c.embed(a) * c.jones * c.embed(b), kTol), 0.5 * a * b), 1e-9);
    EXPECT_LT(dist(c.jones * c.embed(a) * c.jones, c.embed(p.E(a)) * c.jones), 1e-9);
  }
}

TEST(Models, DualExpectationRejectsOutsiders) {
  InclusionPair p = make_inclusion_pair(fix_b(kTol), kTol);
  BasicConstruction c = crossed_model(p, kTol);
  Rng rng(2);
  try {
    dual_expectation_apply(c, random_matrix(4, 4, rng), kTol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInAlgebra);
  }
}

TEST(Corners, CutExpectationHasIndexOneOnTheComplement) {
  for (const InclusionPair& p : pairs())
    for (ModelKind k : {ModelKind::Crossed, ModelKind::QMat}) {
      if (k == ModelKind::QMat && p.B.ambient_dim() > 3) continue;  // 64x64 ambient: covered by the crossed model
      BasicConstruction c = build_basic(p, k, kTol);
      CutExpectation f = cut_expectation_F(c, kTol);
      expect_all_pass(f.checks, "F");
      EXPECT_EQ(f.corner.dim(), p.A.dim());
      EXPECT_LT(dist(f.index, c.co_jones()), 1e-8);
      expect_all_pass(corner_is_A(c, kTol), "corner");
    }
}

TEST(Flip, FixedPointsAreB) {
  for (const InclusionPair& p : pairs()) {
    BasicConstruction c = q_model(p, kTol);
    FlipFixedPoints r = fixed_points_of_flip(c, kTol);
    expect_all_pass(r.checks, "flip");
    EXPECT_EQ(r.fixed.dim(), p.B.dim());
  }
}

TEST(Reduce, LeftAndRight) {
  for (const InclusionPair& p : pairs()) {
    BasicConstruction c = crossed_model(p, kTol);
    EXPECT_TRUE(reduction_unique(c, kTol));
    Rng rng(11);
    for (int s = 0; s < 20; ++s) {
      Mat x = random_element(c.algebra, rng);
      Mat l = reduce_left(c, x, kTol), r = reduce_right(c, x, kTol);
      EXPECT_LT(dist(c.jones * x, c.jones * c.embed(l)), 1e-9);
      EXPECT_LT(dist(x * c.jones, c.embed(r) * c.jones), 1e-9);
      EXPECT_LT(p.B.residual(l), 1e-9);
    }
  }
}

}  // namespace
