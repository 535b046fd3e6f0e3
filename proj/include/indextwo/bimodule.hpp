#pragma once

// Involutive A-A equivalence bimodules in coordinates.
//
// Vectors are coordinate columns over a d-element carrier basis; A enters
// through its orthonormal basis {a_k}. With c = coordinates:
//
//   a_k . x          = left[k]  c(x)
//   x . a_k          = right[k] c(x)
//   A<x, y>  (coord k) = c(x)^T left_inner[k]  conj(c(y))     linear in x
//   <x, y>_A (coord k) = c(x)^H right_inner[k] c(y)           linear in y
//   x#               = sharp conj(c(x))   (or sharp c(x) when not conjugate-linear)

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "basic.hpp"
#include "checks.hpp"

namespace indextwo {

class Bimodule {
 public:
  using Action = std::function<Mat(const Mat&, const Mat&)>;
  using Inner = std::function<Mat(const Mat&, const Mat&)>;
  using Sharp = std::function<Mat(const Mat&)>;

  Bimodule() = default;

  /// Tabulates a bimodule whose carrier is a subspace of matrices. The action
  /// callbacks receive elements of `coeff`; inner-product callbacks return them.
  static Bimodule from_concrete(std::string name, const CStarAlg& coeff, const Subspace& carrier, const Action& left,
                                const Action& right, const Inner& left_inner, const Inner& right_inner,
                                const Sharp& sharp, const Tol& tol) {
    Bimodule x;
    x.name_ = std::move(name);
    x.coeff_ = coeff;
    x.carrier_ = carrier;
    x.concrete_ = true;
    const Eigen::Index d = carrier.dim();
    const auto& e = carrier.basis();
    auto member = [&](const Mat& m, const char* what) -> Vec {
      const double r = carrier.residual(m);
      if (r > tol.bound(m.norm()) * 10.0)
        throw Error(ErrorKind::NotInAlgebra, std::string(what) + " leaves the carrier (residual " +
                                                 std::to_string(r) + ")");
      return carrier.coords(m);
    };
    auto coeff_coords = [&](const Mat& m, const char* what) -> Vec {
      const double r = coeff.residual(m);
      if (r > tol.bound(m.norm()) * 10.0)
        throw Error(ErrorKind::NotInAlgebra, std::string(what) + " is not in the coefficient algebra (residual " +
                                                 std::to_string(r) + ")");
      return coeff.coords(m);
    };
    for (const Mat& a : coeff.basis()) {
      Mat l(d, d), r(d, d);
      for (Eigen::Index p = 0; p < d; ++p) {
        l.col(p) = member(left(a, e[static_cast<std::size_t>(p)]), "left action");
        r.col(p) = member(right(e[static_cast<std::size_t>(p)], a), "right action");
      }
      x.left_.push_back(l);
      x.right_.push_back(r);
    }
    const Eigen::Index da = coeff.dim();
    x.left_inner_.assign(static_cast<std::size_t>(da), Mat::Zero(d, d));
    x.right_inner_.assign(static_cast<std::size_t>(da), Mat::Zero(d, d));
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = 0; q < d; ++q) {
        const Vec li = coeff_coords(left_inner(e[static_cast<std::size_t>(p)], e[static_cast<std::size_t>(q)]),
                                    "left inner product");
        const Vec ri = coeff_coords(right_inner(e[static_cast<std::size_t>(p)], e[static_cast<std::size_t>(q)]),
                                    "right inner product");
        for (Eigen::Index k = 0; k < da; ++k) {
          x.left_inner_[static_cast<std::size_t>(k)](p, q) = li(k);
          x.right_inner_[static_cast<std::size_t>(k)](p, q) = ri(k);
        }
      }
    if (sharp) {
      x.sharp_ = Mat(d, d);
      for (Eigen::Index p = 0; p < d; ++p) x.sharp_->col(p) = member(sharp(e[static_cast<std::size_t>(p)]), "involution");
    }
    return x;
  }

  /// Direct construction from coefficient tensors.
  static Bimodule from_tensors(std::string name, const CStarAlg& coeff, std::vector<Mat> left, std::vector<Mat> right,
                               std::vector<Mat> left_inner, std::vector<Mat> right_inner, std::optional<Mat> sharp,
                               bool conjugate_linear = true) {
    Bimodule x;
    x.name_ = std::move(name);
    x.coeff_ = coeff;
    x.left_ = std::move(left);
    x.right_ = std::move(right);
    x.left_inner_ = std::move(left_inner);
    x.right_inner_ = std::move(right_inner);
    x.sharp_ = std::move(sharp);
    x.conjugate_linear_ = conjugate_linear;
    const auto da = static_cast<std::size_t>(coeff.dim());
    if (x.left_.size() != da || x.right_.size() != da || x.left_inner_.size() != da || x.right_inner_.size() != da)
      throw Error(ErrorKind::DimensionMismatch, "coefficient tensors do not match dim A");
    const Eigen::Index d = x.dim();
    auto square = [d](const Mat& m) { return m.rows() == d && m.cols() == d; };
    for (std::size_t k = 0; k < da; ++k)
      if (!square(x.left_[k]) || !square(x.right_[k]) || !square(x.left_inner_[k]) || !square(x.right_inner_[k]))
        throw Error(ErrorKind::DimensionMismatch, "coefficient tensor has wrong shape");
    if (x.sharp_ && !square(*x.sharp_)) throw Error(ErrorKind::DimensionMismatch, "involution has wrong shape");
    return x;
  }

  const std::string& name() const { return name_; }
  const CStarAlg& coeff() const { return coeff_; }
  Eigen::Index dim() const {
    if (concrete_) return carrier_.dim();
    return left_.empty() ? 0 : left_.front().rows();
  }
  bool concrete() const { return concrete_; }
  const Subspace& carrier() const { return carrier_; }
  bool has_involution() const { return sharp_.has_value(); }
  bool conjugate_linear() const { return conjugate_linear_; }
  const Mat& sharp_matrix() const { return *sharp_; }
  const std::vector<Mat>& left_tensor() const { return left_; }
  const std::vector<Mat>& right_tensor() const { return right_; }
  const std::vector<Mat>& left_inner_tensor() const { return left_inner_; }
  const std::vector<Mat>& right_inner_tensor() const { return right_inner_; }

  /// Matrix of x -> a.x (resp. x.a) in carrier coordinates.
  Mat left_matrix(const Mat& a) const { return combine(left_, coeff_.coords(a)); }
  Mat right_matrix(const Mat& a) const { return combine(right_, coeff_.coords(a)); }

  Vec act_left(const Mat& a, const Vec& x) const { return left_matrix(a) * x; }
  Vec act_right(const Vec& x, const Mat& a) const { return right_matrix(a) * x; }

  Mat left_inner(const Vec& x, const Vec& y) const {
    Vec c(coeff_.dim());
    for (Eigen::Index k = 0; k < c.size(); ++k)
      c(k) = (x.transpose() * left_inner_[static_cast<std::size_t>(k)] * y.conjugate())(0, 0);
    return coeff_.from_coords(c);
  }
  Mat right_inner(const Vec& x, const Vec& y) const {
    Vec c(coeff_.dim());
    for (Eigen::Index k = 0; k < c.size(); ++k)
      c(k) = (x.adjoint() * right_inner_[static_cast<std::size_t>(k)] * y)(0, 0);
    return coeff_.from_coords(c);
  }

  Vec sharp(const Vec& x) const {
    if (!sharp_) throw Error(ErrorKind::InvalidExpectation, "bimodule has no involution");
    return conjugate_linear_ ? Vec(*sharp_ * x.conjugate()) : Vec(*sharp_ * x);
  }

  /// The concrete matrix of a coordinate vector.
  Mat realize(const Vec& x) const {
    if (!concrete_) throw Error(ErrorKind::DimensionMismatch, "bimodule has no concrete carrier");
    return carrier_.from_coords(x);
  }
  Vec coords(const Mat& m) const {
    if (!concrete_) throw Error(ErrorKind::DimensionMismatch, "bimodule has no concrete carrier");
    return carrier_.coords(m);
  }

  Vec basis_vector(Eigen::Index p) const { return Vec::Unit(dim(), p); }

  /// Replaces the involution; used for mutation controls.
  Bimodule with_sharp(std::optional<Mat> s, bool conjugate_linear) const {
    Bimodule x = *this;
    x.sharp_ = std::move(s);
    x.conjugate_linear_ = conjugate_linear;
    return x;
  }

 private:
  static Mat combine(const std::vector<Mat>& t, const Vec& c) {
    Mat out = Mat::Zero(t.empty() ? 0 : t.front().rows(), t.empty() ? 0 : t.front().cols());
    for (std::size_t k = 0; k < t.size(); ++k) out += c(static_cast<Eigen::Index>(k)) * t[k];
    return out;
  }

  std::string name_;
  CStarAlg coeff_;
  Subspace carrier_;
  bool concrete_ = false;
  std::vector<Mat> left_, right_, left_inner_, right_inner_;
  std::optional<Mat> sharp_;
  bool conjugate_linear_ = true;
};

inline Vec random_vector(Eigen::Index d, Rng& rng) {
  Vec v(d);
  for (Eigen::Index k = 0; k < d; ++k) v(k) = gaussian_complex(rng);
  return v;
}

/// Every axiom of an involutive equivalence bimodule, on basis tuples and on
/// seeded random vectors with complex coefficients.
inline CheckList verify_bimodule(const Bimodule& x, const Tol& tol) {
  CheckList out;
  const CStarAlg& a = x.coeff();
  const Eigen::Index d = x.dim();
  const double bound = 1e-9;
  if (d == 0) {
    out.require("nonzero", "X != 0", false);
    out.require("left_full", "span A<X, X> = A", false);
    out.require("right_full", "span <X, X>_A = A", false);
    return out;
  }

  Rng rng(tol.rng_seed);
  const int samples = std::min(tol.sample_count, 16);
  std::vector<Mat> elems(a.basis());
  elems.push_back(Complex(0.0, 1.0) * a.unit());
  for (int s = 0; s < samples; ++s) elems.push_back(random_element(a, rng));
  std::vector<Vec> vecs;
  for (Eigen::Index p = 0; p < d; ++p) vecs.push_back(x.basis_vector(p));
  for (int s = 0; s < samples; ++s) vecs.push_back(random_vector(d, rng));
  std::vector<Mat> lm, rm;
  for (const Mat& e : elems) {
    lm.push_back(x.left_matrix(e));
    rm.push_back(x.right_matrix(e));
  }

  double l_assoc = 0, r_assoc = 0, commute = 0;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = 0; j < elems.size(); ++j) {
      const Mat ab = elems[i] * elems[j];
      l_assoc = std::max(l_assoc, (x.left_matrix(ab) - lm[i] * lm[j]).norm());
      r_assoc = std::max(r_assoc, (x.right_matrix(ab) - rm[j] * rm[i]).norm());
      commute = std::max(commute, (lm[i] * rm[j] - rm[j] * lm[i]).norm());
    }
  const Mat id = Mat::Identity(d, d);
  out.add("left_associative", "(ab).x = a.(b.x)", l_assoc, bound);
  out.add("right_associative", "x.(ab) = (x.a).b", r_assoc, bound);
  out.add("bimodule", "(a.x).b = a.(x.b)", commute, bound);
  out.add("unit", "1.x = x = x.1", std::max((x.left_matrix(a.unit()) - id).norm(), (x.right_matrix(a.unit()) - id).norm()),
          bound);

  double pos_l = 0, pos_r = 0, herm_l = 0, herm_r = 0, lin_l = 0, lin_r = 0, adj_l = 0, adj_r = 0, norm_eq = 0;
  for (const Vec& u : vecs) {
    const Mat lu = x.left_inner(u, u), ru = x.right_inner(u, u);
    pos_l = std::max(pos_l, std::max(0.0, -min_eigenvalue(lu)) + hermitian_defect(lu));
    pos_r = std::max(pos_r, std::max(0.0, -min_eigenvalue(ru)) + hermitian_defect(ru));
    norm_eq = std::max(norm_eq, std::abs(op_norm(lu) - op_norm(ru)));
    for (const Vec& v : vecs) {
      const Mat luv = x.left_inner(u, v), ruv = x.right_inner(u, v);
      herm_l = std::max(herm_l, (luv.adjoint() - x.left_inner(v, u)).norm());
      herm_r = std::max(herm_r, (ruv.adjoint() - x.right_inner(v, u)).norm());
    }
  }
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = 0; q < d; ++q) {
        const Vec& u = vecs[static_cast<std::size_t>(p)];
        const Vec& v = vecs[static_cast<std::size_t>(q)];
        const Mat& e = elems[i];
        lin_l = std::max(lin_l, (x.left_inner(lm[i] * u, v) - e * x.left_inner(u, v)).norm());
        lin_r = std::max(lin_r, (x.right_inner(u, rm[i] * v) - x.right_inner(u, v) * e).norm());
        adj_r = std::max(adj_r, (x.right_inner(lm[i] * u, v) - x.right_inner(u, x.act_left(e.adjoint(), v))).norm());
        adj_l = std::max(adj_l, (x.left_inner(rm[i] * u, v) - x.left_inner(u, x.act_right(v, e.adjoint()))).norm());
      }
  out.add("left_inner_positive", "A<x, x> >= 0", pos_l, bound);
  out.add("right_inner_positive", "<x, x>_A >= 0", pos_r, bound);
  out.add("left_inner_hermitian", "A<x, y>* = A<y, x>", herm_l, bound);
  out.add("right_inner_hermitian", "<x, y>_A* = <y, x>_A", herm_r, bound);
  out.add("left_inner_linear", "A<a.x, y> = a A<x, y>", lin_l, bound);
  out.add("right_inner_linear", "<x, y.a>_A = <x, y>_A a", lin_r, bound);
  out.add("right_adjointable", "<a.x, y>_A = <x, a*.y>_A", adj_r, bound);
  out.add("left_adjointable", "A<x.a, y> = A<x, y.a*>", adj_l, bound);
  out.add("norm_compatible", "||A<x, x>|| = ||<x, x>_A||", norm_eq, bound);

  double imprim = 0;
  for (Eigen::Index p = 0; p < d; ++p)
    for (Eigen::Index q = 0; q < d; ++q)
      for (Eigen::Index r = 0; r < d; ++r) {
        const Vec u = x.basis_vector(p), v = x.basis_vector(q), w = x.basis_vector(r);
        imprim = std::max(imprim, (x.act_left(x.left_inner(u, v), w) - x.act_right(u, x.right_inner(v, w))).norm());
      }
  out.add("imprimitivity", "A<x, y>.z = x.<y, z>_A", imprim, bound);

  std::vector<Mat> lvals, rvals;
  for (Eigen::Index p = 0; p < d; ++p)
    for (Eigen::Index q = 0; q < d; ++q) {
      lvals.push_back(x.left_inner(x.basis_vector(p), x.basis_vector(q)));
      rvals.push_back(x.right_inner(x.basis_vector(p), x.basis_vector(q)));
    }
  const Eigen::Index n = a.ambient_dim();
  out.require("left_full", "span A<X, X> = A", Subspace::from_spanning(n, n, lvals, tol).dim() == a.dim());
  out.require("right_full", "span <X, X>_A = A", Subspace::from_spanning(n, n, rvals, tol).dim() == a.dim());

  if (!x.has_involution()) return out;
  double invol = 0, twist = 0, exch = 0;
  for (const Vec& u : vecs) {
    invol = std::max(invol, (x.sharp(x.sharp(u)) - u).norm());
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const std::size_t j = (i * 7 + 3) % elems.size();
      const Vec lhs = x.sharp(rm[j] * (lm[i] * u));
      const Vec rhs = x.act_right(x.act_left(elems[j].adjoint(), x.sharp(u)), elems[i].adjoint());
      twist = std::max(twist, (lhs - rhs).norm());
    }
    for (const Vec& v : vecs)
      exch = std::max(exch, (x.left_inner(u, x.sharp(v)) - x.right_inner(x.sharp(u), v)).norm());
  }
  out.add("sharp_involutive", "(x#)# = x", invol, bound);
  out.add("sharp_twists_actions", "(a.x.b)# = b*.x#.a*", twist, bound);
  out.add("sharp_exchanges_inner", "A<x, y#> = <x#, y>_A", exch, bound);
  return out;
}

/// The dual bimodule: coordinates of x~ are conj(c(x)); b.x~.a = (a*.x.b*)~,
/// A<x~, y~> = <x, y>_A, <x~, y~>_A = A<x, y>. No involution.
inline Bimodule dual(const Bimodule& x) {
  const CStarAlg& a = x.coeff();
  std::vector<Mat> left, right;
  for (const Mat& b : a.basis()) {
    left.push_back(x.right_matrix(b.adjoint()).conjugate());
    right.push_back(x.left_matrix(b.adjoint()).conjugate());
  }
  return Bimodule::from_tensors(x.name() + "~", a, left, right, x.right_inner_tensor(), x.left_inner_tensor(),
                                std::nullopt);
}

/// Linear map T: X -> Y in coordinates; checks actions, both inner products,
/// bijectivity and (optionally) the involution.
inline CheckList verify_bimodule_iso(const Bimodule& x, const Bimodule& y, const Mat& t, bool with_sharp,
                                     const Tol& tol) {
  CheckList out;
  const double bound = 1e-8;
  const bool shapes = t.rows() == y.dim() && t.cols() == x.dim() && x.coeff().dim() == y.coeff().dim();
  out.require("shapes", "T: X -> Y over the same A", shapes);
  if (!shapes) return out;
  out.require("bijective", "T bijective", x.dim() == y.dim() && rank_tol(t, tol) == x.dim());
  double left = 0, right = 0, li = 0, ri = 0;
  for (std::size_t k = 0; k < x.left_tensor().size(); ++k) {
    left = std::max(left, (t * x.left_tensor()[k] - y.left_tensor()[k] * t).norm());
    right = std::max(right, (t * x.right_tensor()[k] - y.right_tensor()[k] * t).norm());
    li = std::max(li, (t.transpose() * y.left_inner_tensor()[k] * t.conjugate() - x.left_inner_tensor()[k]).norm());
    ri = std::max(ri, (t.adjoint() * y.right_inner_tensor()[k] * t - x.right_inner_tensor()[k]).norm());
  }
  out.add("left_action", "T(a.x) = a.T(x)", left, bound);
  out.add("right_action", "T(x.a) = T(x).a", right, bound);
  out.add("left_inner", "A<Tx, Ty> = A<x, y>", li, bound);
  out.add("right_inner", "<Tx, Ty>_A = <x, y>_A", ri, bound);
  if (with_sharp) {
    const bool both = x.has_involution() && y.has_involution() && x.conjugate_linear() == y.conjugate_linear();
    out.require("both_involutive", "X, Y carry conjugate-linear involutions", both);
    if (both) {
      const Mat tt = x.conjugate_linear() ? Mat(t.conjugate()) : t;
      out.add("sharp", "T(x#) = T(x)#", (t * x.sharp_matrix() - y.sharp_matrix() * tt).norm(), bound);
    }
  }
  return out;
}

/// V(x) = (x#)~ : X -> dual(X), as a coordinate matrix.
inline Mat V_map(const Bimodule& x) {
  if (!x.has_involution() || !x.conjugate_linear())
    throw Error(ErrorKind::InvalidExpectation, "V needs a conjugate-linear involution");
  return x.sharp_matrix().conjugate();
}

/// Rieffel fullness witness: sum_i <z_i, y_i>_A = 1 with z_i basis vectors.
struct FullnessWitness {
  std::vector<std::pair<Vec, Vec>> pairs;
  double residual = 0.0;
};

inline FullnessWitness fullness_witness(const Bimodule& x, const Tol& tol) {
  const CStarAlg& a = x.coeff();
  const Eigen::Index d = x.dim();
  Mat sys(a.dim(), d * d);
  for (Eigen::Index p = 0; p < d; ++p)
    for (Eigen::Index q = 0; q < d; ++q) sys.col(p * d + q) = a.coords(x.right_inner(x.basis_vector(p), x.basis_vector(q)));
  auto [c, res] = solve_ls(sys, a.coords(a.unit()));
  FullnessWitness w;
  for (Eigen::Index p = 0; p < d; ++p) {
    Vec y = Vec::Zero(d);
    for (Eigen::Index q = 0; q < d; ++q) y(q) = c(p * d + q, 0);
    if (y.norm() > 0) w.pairs.emplace_back(x.basis_vector(p), y);
  }
  Mat sum = Mat::Zero(a.ambient_dim(), a.ambient_dim());
  for (const auto& [z, y] : w.pairs) sum += x.right_inner(z, y);
  w.residual = (sum - a.unit()).norm();
  (void)res;
  if (w.residual > tol.bound(1.0) * 1e3)
    throw Error(ErrorKind::IsoResidualExceeded, "bimodule is not right-full (residual " + std::to_string(w.residual) + ")");
  return w;
}

// ---------------------------------------------------------------------------
// Concrete constructions

/// X_B = e_A C (1 - e_A) over the base of the pair: a.x.b = psi(a) x phi(b),
/// A<x, y> = 2 E~(x y*), <x, y>_A = 2 E~(x* y), x# = beta^(x*).
inline Bimodule build_XB(const BasicConstruction& c, const Tol& tol) {
  const InclusionPair& p = c.pair;
  const Mat co = c.co_jones();
  const Eigen::Index n = c.algebra.ambient_dim();
  std::vector<Mat> span;
  for (const Mat& x : c.algebra.basis()) span.push_back(c.jones * x * co);
  Subspace carrier = Subspace::from_spanning(n, n, span, tol);
  auto lift = [&](const Mat& a) -> Mat { return c.embed(p.embed_base(a)); };
  auto down = [&](const Mat& m) -> Mat { return p.to_base(2.0 * c.dual_expectation(m)); };
  return Bimodule::from_concrete(
      "X_B", p.base, carrier, [&](const Mat& a, const Mat& x) -> Mat { return lift(a) * x; },
      [&](const Mat& x, const Mat& a) -> Mat { return x * lift(a); },
      [&](const Mat& x, const Mat& y) -> Mat { return down(x * y.adjoint()); },
      [&](const Mat& x, const Mat& y) -> Mat { return down(x.adjoint() * y); },
      [&](const Mat& x) -> Mat { return c.flip(x.adjoint()); }, tol);
}

/// B_- = ker E with the actions of A in B, A<x, y> = E(x y*), <x, y>_A = E(x* y), x# = x*.
inline Bimodule build_Bminus(const InclusionPair& p, const Tol& tol) {
  Subspace carrier = odd_part(p, tol);
  auto lift = [&](const Mat& a) -> Mat { return p.embed_base(a); };
  auto down = [&](const Mat& m) -> Mat { return p.to_base(p.E(m)); };
  return Bimodule::from_concrete(
      "B_-", p.base, carrier, [&](const Mat& a, const Mat& x) -> Mat { return lift(a) * x; },
      [&](const Mat& x, const Mat& a) -> Mat { return x * lift(a); },
      [&](const Mat& x, const Mat& y) -> Mat { return down(x * y.adjoint()); },
      [&](const Mat& x, const Mat& y) -> Mat { return down(x.adjoint() * y); },
      [](const Mat& x) -> Mat { return x.adjoint(); }, tol);
}

/// e_A x (1 - e_A) -> m - E(m) with m = reduce_left(e_A x (1 - e_A)), as a
/// coordinate matrix X_B -> B_-, together with its verification.
struct BimoduleMap {
  Mat matrix;
  CheckList checks;
};

inline BimoduleMap canonical_XB_to_Bminus(const BasicConstruction& c, const Bimodule& xb, const Bimodule& bm,
                                          const Tol& tol) {
  const InclusionPair& p = c.pair;
  Mat t(bm.dim(), xb.dim());
  for (Eigen::Index k = 0; k < xb.dim(); ++k) {
    const Mat m = reduce_left(c, xb.realize(xb.basis_vector(k)), tol);
    t.col(k) = bm.coords(m - p.E(m));
  }
  BimoduleMap r{t, verify_bimodule_iso(xb, bm, t, true, tol)};
  return r;
}

/// Defects of a 2Z-inner system (A, alpha, z): alpha a *-automorphism,
/// z unitary in A, alpha(z) = z, alpha^2 = Ad(z).
inline CheckList validate_two_z_inner(const CStarAlg& a, const LinearMap& alpha, const Mat& z, const Tol& tol) {
  CheckList out;
  const double bound = tol.bound(1.0) * 100.0;
  const bool shapes = alpha.domain().dim() == a.dim() && alpha.codomain().dim() == a.dim() &&
                      z.rows() == a.ambient_dim() && z.cols() == a.ambient_dim();
  out.require("shapes", "alpha: A -> A, z in M_n", shapes);
  if (!shapes) return out;
  out.add("alpha_automorphism", "alpha(xy) = alpha(x) alpha(y), alpha(x*) = alpha(x)*", automorphism_defect(alpha),
          bound);
  out.require("alpha_bijective", "alpha bijective", alpha.rank(tol) == a.dim());
  out.add("z_in_A", "z in A", a.residual(z), bound);
  out.add("z_unitary", "z z* = z* z = 1",
          std::max((z * z.adjoint() - a.unit()).norm(), (z.adjoint() * z - a.unit()).norm()), bound);
  out.add("alpha_fixes_z", "alpha(z) = z", (alpha(a.project(z)) - z).norm(), bound);
  double sq = 0.0;
  for (const Mat& x : a.basis()) sq = std::max(sq, (alpha(alpha(x)) - z * x * z.adjoint()).norm());
  out.add("alpha_squared_inner", "alpha^2 = Ad(z)", sq, bound);
  return out;
}

/// X_alpha = A with a.x.b = a x alpha(b), A<x, y> = x y*,
/// <x, y>_A = alpha^-1(x* y), x# = z* alpha(x*).
/// The placement of z is the one forced by (a.x.b)# = b*.x#.a* and matches
/// the product rule of the matrix model {[[a, x], [alpha(xz), alpha(a)]]}.
inline Bimodule build_Xalpha(const CStarAlg& a, const LinearMap& alpha, const Mat& z, const Tol& tol) {
  CheckList v = validate_two_z_inner(a, alpha, z, tol);
  if (!v.all_pass()) {
    std::string failed;
    for (const Check& c : v.checks())
      if (!c.pass) failed += " " + c.name;
    throw Error(ErrorKind::NotTwoZInner, "not a 2Z-inner system:" + failed);
  }
  const LinearMap inv = alpha.inverse(tol);
  const Eigen::Index n = a.ambient_dim();
  Subspace carrier = Subspace::from_spanning(n, n, a.basis(), tol);
  return Bimodule::from_concrete(
      "X_alpha", a, carrier, [](const Mat& b, const Mat& x) -> Mat { return b * x; },
      [&](const Mat& x, const Mat& b) -> Mat { return x * alpha(b); },
      [](const Mat& x, const Mat& y) -> Mat { return x * y.adjoint(); },
      [&](const Mat& x, const Mat& y) -> Mat { return inv(x.adjoint() * y); },
      [&](const Mat& x) -> Mat { return z.adjoint() * alpha(x.adjoint()); }, tol);
}

}  // namespace indextwo
