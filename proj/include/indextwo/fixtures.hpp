#pragma once

// The shipped catalog of small index-2 inclusions.
//
//   FIX-A  C.1 in C^2 (diagonal of M_2), swap of coordinates
//   FIX-B  D_2 in M_2, E = diagonal compression
//   FIX-C  C + M_2 in M_3, E(b) = p b p + p' b p' with p = e_11
//   FIX-D  fixed points of Ad(w) in M_4 for a seeded self-adjoint unitary w
//   C3     {(x, x, y)} in C^3: an order-2 automorphism whose index is diag(2, 2, 1)
//   FIX-E  2Z-inner system A = M_2, alpha = Ad(diag(1, i)), z = diag(1, -1)

#include <string>
#include <vector>

#include "dynamics.hpp"

namespace indextwo::fixtures {

inline CStarAlg full_matrix_algebra(Eigen::Index n, const Tol& tol) {
  std::vector<Mat> units;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) units.push_back(unit(n, i, j));
  return CStarAlg::from_spanning(n, units, tol);
}

inline CStarAlg diagonal_algebra(Eigen::Index n, const Tol& tol) {
  std::vector<Mat> units;
  for (Eigen::Index i = 0; i < n; ++i) units.push_back(unit(n, i, i));
  return CStarAlg::from_spanning(n, units, tol);
}

inline Mat flip2() { return unit(2, 0, 1) + unit(2, 1, 0); }

inline CondExp fix_a(const Tol& tol) {
  return expectation_from_involutive_automorphism(diagonal_algebra(2, tol), flip2(), tol);
}

inline CondExp fix_b(const Tol& tol) {
  return expectation_from_involutive_automorphism(full_matrix_algebra(2, tol), diag({1.0, -1.0}), tol);
}

inline CondExp fix_c(const Tol& tol) {
  return expectation_from_involutive_automorphism(full_matrix_algebra(3, tol), diag({1.0, -1.0, -1.0}), tol);
}

/// Self-adjoint unitary w in M_4 with 1, 2 or 3 eigenvalues equal to -1.
inline Mat fix_d_unitary(std::uint64_t seed) {
  Rng rng(seed * 0x9E3779B97F4A7C15ULL + 17);
  const int minus = 1 + static_cast<int>(rng() % 3);
  Mat v = random_unitary(4, rng);
  Mat d = Mat::Identity(4, 4);
  for (int k = 0; k < minus; ++k) d(3 - k, 3 - k) = -1.0;
  return v * d * v.adjoint();
}

inline CondExp fix_d(std::uint64_t seed, const Tol& tol) {
  return expectation_from_involutive_automorphism(full_matrix_algebra(4, tol), fix_d_unitary(seed), tol);
}

inline Mat swap12_in_3() { return unit(3, 0, 1) + unit(3, 1, 0) + unit(3, 2, 2); }

inline CondExp c3_control(const Tol& tol) {
  return expectation_from_involutive_automorphism(diagonal_algebra(3, tol), swap12_in_3(), tol);
}

inline TwoZInnerSystem fix_e(const Tol& tol) {
  CStarAlg m2 = full_matrix_algebra(2, tol);
  return {m2, inner_automorphism(m2, diag({1.0, Complex(0.0, 1.0)}), tol), diag({1.0, -1.0})};
}

/// Looks a fixture up by name: fix-a, fix-b, fix-c, fix-d (seeded) or c3.
inline CondExp by_name(const std::string& name, std::uint64_t seed, const Tol& tol) {
  if (name == "fix-a") return fix_a(tol);
  if (name == "fix-b") return fix_b(tol);
  if (name == "fix-c") return fix_c(tol);
  if (name == "fix-d") return fix_d(seed, tol);
  if (name == "c3") return c3_control(tol);
  throw Error(ErrorKind::ParseError, "unknown fixture '" + name + "'");
}

}  // namespace indextwo::fixtures
