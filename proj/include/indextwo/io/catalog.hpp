#pragma once

// Model files for the shipped fixtures. `fix-d-<seed>` is the seeded family;
// `fix-a-matrix` is FIX-A given by its superoperator.

#include <string>
#include <vector>

#include "../fixtures.hpp"
#include "model_file.hpp"

namespace indextwo::io {

inline std::vector<Mat> matrix_units(Eigen::Index n) {
  std::vector<Mat> out;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out.push_back(unit(n, i, j));
  return out;
}

inline std::vector<Mat> diagonal_units(Eigen::Index n) {
  std::vector<Mat> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(unit(n, i, i));
  return out;
}

inline const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"fix-a", "fix-a-matrix", "fix-b", "fix-c",  "fix-d-0",
                                              "fix-d-1", "fix-d-2",    "fix-e", "c3"};
  return names;
}

inline ModelFile involution_model(std::string name, std::string description, std::vector<Mat> b_basis, Mat w) {
  ModelFile m;
  m.name = std::move(name);
  m.description = std::move(description);
  m.ambient_dim = w.rows();
  m.algebra_B = AlgebraSpec{false, std::move(b_basis)};
  m.expectation = ExpectationSpec{ExpectationKind::Involution, std::move(w), {}, {}};
  return m;
}

inline ModelFile fixture_model(const std::string& name) {
  using namespace fixtures;
  if (name == "fix-a")
    return involution_model(name, "C.1 in C^2, E = mean of the two coordinates", diagonal_units(2), flip2());
  if (name == "fix-a-matrix") {
    ModelFile m = fixture_model("fix-a");
    m.name = name;
    m.description = "FIX-A with E given as a superoperator";
    const Mat w = flip2();
    m.expectation = ExpectationSpec{ExpectationKind::Matrix, {}, {},
                                    superoperator_of(2, [&](const Mat& x) -> Mat {
                                      return 0.5 * (x + w * x * w.adjoint());
                                    })};
    return m;
  }
  if (name == "fix-b") return involution_model(name, "D_2 in M_2, E = diagonal compression", matrix_units(2), diag({1.0, -1.0}));
  if (name == "fix-c") {
    ModelFile m;
    m.name = name;
    m.description = "C + M_2 in M_3, E(b) = p b p + (1 - p) b (1 - p) with p = e_11";
    m.ambient_dim = 3;
    m.algebra_A = AlgebraSpec{false, {unit(3, 0, 0), unit(3, 1, 1), unit(3, 1, 2), unit(3, 2, 1), unit(3, 2, 2)}};
    m.algebra_B = AlgebraSpec{false, matrix_units(3)};
    m.expectation = ExpectationSpec{ExpectationKind::Blocks, {}, {unit(3, 0, 0), unit(3, 1, 1) + unit(3, 2, 2)}, {}};
    return m;
  }
  if (name.rfind("fix-d-", 0) == 0) {
    std::uint64_t seed = 0;
    try {
      std::size_t used = 0;
      seed = std::stoull(name.substr(6), &used);
      if (used != name.size() - 6) throw std::invalid_argument(name);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "bad fixture seed in '" + name + "'");
    }
    return involution_model(name, "fixed points of Ad(w) in M_4, w seeded self-adjoint unitary", matrix_units(4),
                            fix_d_unitary(seed));
  }
  if (name == "fix-e") {
    ModelFile m;
    m.name = name;
    m.description = "A = M_2, alpha = Ad(diag(1, i)), z = diag(1, -1)";
    m.ambient_dim = 2;
    m.algebra_A = AlgebraSpec{false, matrix_units(2)};
    m.dynamics = DynamicsSpec{MapSpec{true, diag({1.0, Complex(0.0, 1.0)}), {}}, diag({1.0, -1.0})};
    return m;
  }
  if (name == "c3")
    return involution_model(name, "{(x, x, y)} in C^3: index diag(2, 2, 1), rejected", diagonal_units(3), swap12_in_3());
  throw Error(ErrorKind::ParseError, "unknown fixture '" + name + "'");
}

}  // namespace indextwo::io
