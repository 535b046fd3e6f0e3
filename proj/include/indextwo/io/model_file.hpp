#pragma once

// Model files: one JSON document describing an inclusion (B, E) and/or a
// 2Z-inner system on A.
//
//   { "name", "description", "ambient_dim", "tolerance": {...},
//     "algebra_A": {"basis" | "generators": [matrix...]},        optional
//     "algebra_B": {"basis" | "generators": [matrix...]},
//     "expectation": {"kind": "involution", "unitary": matrix}
//                  | {"kind": "blocks", "projections": [matrix...]}
//                  | {"kind": "matrix", "superoperator": n^2 x n^2 matrix},
//     "dynamics": {"alpha": {"unitary": matrix} | {"superoperator": matrix},
//                  "z": matrix} }                                  optional
//
// Superoperators act on the row-major flattening, x(i, j) at index i n + j.

#include <optional>
#include <string>
#include <vector>

#include "../dynamics.hpp"
#include "json_codec.hpp"

namespace indextwo::io {

struct AlgebraSpec {
  bool generators = false;  // close under products, else the list is a basis
  std::vector<Mat> mats;
};

struct ExpectationSpec {
  ExpectationKind kind = ExpectationKind::Involution;
  Mat unitary;
  std::vector<Mat> projections;
  Mat superoperator;
};

struct MapSpec {
  bool inner = true;  // Ad(unitary), else superoperator
  Mat unitary;
  Mat superoperator;
};

struct DynamicsSpec {
  MapSpec alpha;
  Mat z;
};

struct ModelFile {
  std::string name;
  std::string description;
  Eigen::Index ambient_dim = 0;
  Tol tolerance;
  std::optional<AlgebraSpec> algebra_A;
  std::optional<AlgebraSpec> algebra_B;
  std::optional<ExpectationSpec> expectation;
  std::optional<DynamicsSpec> dynamics;
};

namespace detail {

inline bool same(const Mat& a, const Mat& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; }

inline bool same(const std::vector<Mat>& a, const std::vector<Mat>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!same(a[k], b[k])) return false;
  return true;
}

}  // namespace detail

inline bool operator==(const AlgebraSpec& a, const AlgebraSpec& b) {
  return a.generators == b.generators && detail::same(a.mats, b.mats);
}
inline bool operator==(const ExpectationSpec& a, const ExpectationSpec& b) {
  return a.kind == b.kind && detail::same(a.unitary, b.unitary) && detail::same(a.projections, b.projections) &&
         detail::same(a.superoperator, b.superoperator);
}
inline bool operator==(const MapSpec& a, const MapSpec& b) {
  return a.inner == b.inner && detail::same(a.unitary, b.unitary) && detail::same(a.superoperator, b.superoperator);
}
inline bool operator==(const DynamicsSpec& a, const DynamicsSpec& b) {
  return a.alpha == b.alpha && detail::same(a.z, b.z);
}
inline bool operator==(const Tol& a, const Tol& b) {
  return a.abs_eps == b.abs_eps && a.rel_eps == b.rel_eps && a.sample_count == b.sample_count &&
         a.rng_seed == b.rng_seed;
}
inline bool operator==(const ModelFile& a, const ModelFile& b) {
  return a.name == b.name && a.description == b.description && a.ambient_dim == b.ambient_dim &&
         a.tolerance == b.tolerance && a.algebra_A == b.algebra_A && a.algebra_B == b.algebra_B &&
         a.expectation == b.expectation && a.dynamics == b.dynamics;
}

namespace detail {

inline void require_shape(const Mat& m, Eigen::Index r, Eigen::Index c, const std::string& path) {
  if (m.rows() != r || m.cols() != c)
    throw Error(ErrorKind::DimensionMismatch, path + ": expected " + std::to_string(r) + "x" + std::to_string(c) +
                                                  ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  if (!obj.contains(key)) fail(path + "." + key, "missing field");
  return obj.at(key);
}

inline AlgebraSpec parse_algebra(const Json& j, Eigen::Index n, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  AlgebraSpec s;
  if (j.contains("basis") == j.contains("generators")) fail(path, "give exactly one of basis, generators");
  s.generators = j.contains("generators");
  const char* key = s.generators ? "generators" : "basis";
  s.mats = decode_matrices(j.at(key), path + "." + key);
  if (s.mats.empty()) fail(path + "." + key, "empty list");
  for (std::size_t k = 0; k < s.mats.size(); ++k)
    require_shape(s.mats[k], n, n, path + "." + key + "[" + std::to_string(k) + "]");
  return s;
}

inline ExpectationSpec parse_expectation(const Json& j, Eigen::Index n, const std::string& path) {
  ExpectationSpec s;
  const Json& kind = field(j, "kind", path);
  if (!kind.is_string()) fail(path + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "involution") {
    s.kind = ExpectationKind::Involution;
    s.unitary = decode_matrix(field(j, "unitary", path), path + ".unitary");
    require_shape(s.unitary, n, n, path + ".unitary");
  } else if (k == "blocks") {
    s.kind = ExpectationKind::Blocks;
    s.projections = decode_matrices(field(j, "projections", path), path + ".projections");
    if (s.projections.empty()) fail(path + ".projections", "empty list");
    for (std::size_t i = 0; i < s.projections.size(); ++i)
      require_shape(s.projections[i], n, n, path + ".projections[" + std::to_string(i) + "]");
  } else if (k == "matrix") {
    s.kind = ExpectationKind::Matrix;
    s.superoperator = decode_matrix(field(j, "superoperator", path), path + ".superoperator");
    require_shape(s.superoperator, n * n, n * n, path + ".superoperator");
  } else {
    fail(path + ".kind", "unknown kind '" + k + "' (involution, blocks, matrix)");
  }
  return s;
}

inline DynamicsSpec parse_dynamics(const Json& j, Eigen::Index n, const std::string& path) {
  DynamicsSpec s;
  const Json& alpha = field(j, "alpha", path);
  if (!alpha.is_object() || alpha.contains("unitary") == alpha.contains("superoperator"))
    fail(path + ".alpha", "give exactly one of unitary, superoperator");
  s.alpha.inner = alpha.contains("unitary");
  if (s.alpha.inner) {
    s.alpha.unitary = decode_matrix(alpha.at("unitary"), path + ".alpha.unitary");
    require_shape(s.alpha.unitary, n, n, path + ".alpha.unitary");
  } else {
    s.alpha.superoperator = decode_matrix(alpha.at("superoperator"), path + ".alpha.superoperator");
    require_shape(s.alpha.superoperator, n * n, n * n, path + ".alpha.superoperator");
  }
  s.z = decode_matrix(field(j, "z", path), path + ".z");
  require_shape(s.z, n, n, path + ".z");
  return s;
}

}  // namespace detail

inline ModelFile model_from_json(const Json& j) {
  if (!j.is_object()) fail("model", "top level must be an object");
  ModelFile m;
  const Json& n = detail::field(j, "ambient_dim", "model");
  if (!n.is_number_integer() || n.get<long long>() <= 0) fail("model.ambient_dim", "expected a positive integer");
  m.ambient_dim = n.get<Eigen::Index>();
  if (j.contains("name")) {
    if (!j.at("name").is_string()) fail("model.name", "expected a string");
    m.name = j.at("name").get<std::string>();
  }
  if (j.contains("description")) {
    if (!j.at("description").is_string()) fail("model.description", "expected a string");
    m.description = j.at("description").get<std::string>();
  }
  if (j.contains("tolerance")) m.tolerance = decode_tol(j.at("tolerance"), "model.tolerance");
  if (j.contains("algebra_A")) m.algebra_A = detail::parse_algebra(j.at("algebra_A"), m.ambient_dim, "model.algebra_A");
  if (j.contains("algebra_B")) m.algebra_B = detail::parse_algebra(j.at("algebra_B"), m.ambient_dim, "model.algebra_B");
  if (j.contains("expectation"))
    m.expectation = detail::parse_expectation(j.at("expectation"), m.ambient_dim, "model.expectation");
  if (j.contains("dynamics")) m.dynamics = detail::parse_dynamics(j.at("dynamics"), m.ambient_dim, "model.dynamics");
  if (m.expectation && !m.algebra_B) fail("model.algebra_B", "required with an expectation");
  if (m.algebra_B && !m.expectation) fail("model.expectation", "required with algebra_B");
  if (m.dynamics && !m.algebra_A) fail("model.algebra_A", "required with dynamics");
  if (!m.expectation && !m.dynamics) fail("model", "needs an expectation or a dynamics block");
  return m;
}

/// Parses the text of a model file. Syntax errors carry nlohmann's line and
/// column; structural errors carry the field path.
inline ModelFile parse_model_file(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) fail("model", "empty file");
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  try {
    return model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

inline Json emit_model_file(const ModelFile& m) {
  Json j;
  j["name"] = m.name;
  j["description"] = m.description;
  j["ambient_dim"] = m.ambient_dim;
  j["tolerance"] = encode(m.tolerance);
  auto algebra = [](const AlgebraSpec& a) { return Json{{a.generators ? "generators" : "basis", encode(a.mats)}}; };
  if (m.algebra_A) j["algebra_A"] = algebra(*m.algebra_A);
  if (m.algebra_B) j["algebra_B"] = algebra(*m.algebra_B);
  if (m.expectation) {
    const ExpectationSpec& e = *m.expectation;
    Json ej{{"kind", to_string(e.kind)}};
    switch (e.kind) {
      case ExpectationKind::Involution: ej["unitary"] = encode(e.unitary); break;
      case ExpectationKind::Blocks: ej["projections"] = encode(e.projections); break;
      case ExpectationKind::Matrix: ej["superoperator"] = encode(e.superoperator); break;
    }
    j["expectation"] = std::move(ej);
  }
  if (m.dynamics) {
    const MapSpec& a = m.dynamics->alpha;
    Json aj = a.inner ? Json{{"unitary", encode(a.unitary)}} : Json{{"superoperator", encode(a.superoperator)}};
    j["dynamics"] = Json{{"alpha", std::move(aj)}, {"z", encode(m.dynamics->z)}};
  }
  return j;
}

// ---- instantiation ---------------------------------------------------------

inline Vec row_major(const Mat& x) {
  Vec v(x.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) v(i * x.cols() + j) = x(i, j);
  return v;
}

inline Mat from_row_major(const Vec& v, Eigen::Index n) {
  Mat x(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = v(i * n + j);
  return x;
}

/// Superoperator matrix of a map on n x n matrices.
template <class F>
Mat superoperator_of(Eigen::Index n, F&& f) {
  Mat s(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) s.col(i * n + j) = row_major(f(unit(n, i, j)));
  return s;
}

inline LinearMap superoperator_map(const CStarAlg& a, const Mat& s, const Tol& tol) {
  const Eigen::Index n = a.ambient_dim();
  try {
    return LinearMap::from_function(a, a, [&](const Mat& x) -> Mat { return from_row_major(s * row_major(x), n); },
                                    tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidExpectation, std::string("superoperator does not preserve the algebra: ") + e.what());
  }
}

inline CStarAlg build_algebra(const AlgebraSpec& s, Eigen::Index n, const Tol& tol) {
  return s.generators ? generate_algebra(n, s.mats, tol) : CStarAlg::from_spanning(n, s.mats, tol);
}

struct Model {
  ModelFile file;
  Tol tol;
  std::optional<CondExp> expectation;
  std::optional<TwoZInnerSystem> dynamics;
};

inline Model instantiate(const ModelFile& f, const Tol& tol) {
  Model m{f, tol, std::nullopt, std::nullopt};
  const Eigen::Index n = f.ambient_dim;
  std::optional<CStarAlg> a;
  if (f.algebra_A) a = build_algebra(*f.algebra_A, n, tol);
  if (f.expectation) {
    CStarAlg b = build_algebra(*f.algebra_B, n, tol);
    const ExpectationSpec& e = *f.expectation;
    switch (e.kind) {
      case ExpectationKind::Involution: m.expectation = expectation_from_involutive_automorphism(b, e.unitary, tol); break;
      case ExpectationKind::Blocks: m.expectation = expectation_from_block_compression(b, e.projections, tol); break;
      case ExpectationKind::Matrix: m.expectation = expectation_from_map(b, superoperator_map(b, e.superoperator, tol), tol); break;
    }
    if (a && !m.expectation->target.same_as(*a, tol))
      throw Error(ErrorKind::InvalidExpectation, "the range of E differs from algebra_A");
  }
  if (f.dynamics) {
    const DynamicsSpec& d = *f.dynamics;
    LinearMap alpha = d.alpha.inner ? inner_automorphism(*a, d.alpha.unitary, tol)
                                    : superoperator_map(*a, d.alpha.superoperator, tol);
    m.dynamics = TwoZInnerSystem{*a, alpha, d.z};
  }
  return m;
}

}  // namespace indextwo::io
