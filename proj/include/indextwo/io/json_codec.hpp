#pragma once

// JSON encoding shared by model files and reports. Complex scalars are
// [re, im]; matrices are row-major nested arrays. Objects keep insertion
// order so output is byte-stable.

#include <string>
#include <vector>

#include <json.hpp>

#include "../checks.hpp"
#include "../cstar.hpp"
#include "../dynamics.hpp"

namespace indextwo::io {

using Json = nlohmann::ordered_json;

inline Json encode(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json encode(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(encode(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json encode(const std::vector<Mat>& ms) {
  Json out = Json::array();
  for (const Mat& m : ms) out.push_back(encode(m));
  return out;
}

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::ParseError, path + ": " + msg);
}

/// A scalar is a bare number or [re, im].
inline Complex decode_scalar(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(path, "expected a number or [re, im]");
}

inline Mat decode_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) fail(path + "[0]", "expected a row array");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(rp, "expected a row array");
    if (static_cast<Eigen::Index>(row.size()) != cols) fail(rp, "ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = decode_scalar(row[static_cast<std::size_t>(k)], rp + "[" + std::to_string(k) + "]");
  }
  return m;
}

inline std::vector<Mat> decode_matrices(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of matrices");
  std::vector<Mat> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(decode_matrix(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

inline Json encode(const Tol& t) {
  return Json{{"abs_eps", t.abs_eps}, {"rel_eps", t.rel_eps}, {"sample_count", t.sample_count},
              {"rng_seed", t.rng_seed}};
}

inline Tol decode_tol(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  Tol t;
  try {
    if (j.contains("abs_eps")) t.abs_eps = j.at("abs_eps").get<double>();
    if (j.contains("rel_eps")) t.rel_eps = j.at("rel_eps").get<double>();
    if (j.contains("sample_count")) t.sample_count = j.at("sample_count").get<int>();
    if (j.contains("rng_seed")) t.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    t.validate();
  } catch (const nlohmann::json::exception& e) {
    fail(path, e.what());
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return t;
}

inline Json encode(const CStarAlg& a) { return Json{{"ambient_dim", a.ambient_dim()}, {"basis", encode(a.basis())}}; }

inline Json encode(const Check& c) {
  return Json{{"name", c.name}, {"anchor", c.anchor}, {"residual", c.residual}, {"tolerance", c.tolerance},
              {"pass", c.pass}};
}

inline Json encode(const CheckList& l) {
  Json out = Json::array();
  for (const Check& c : l.checks()) out.push_back(encode(c));
  return out;
}

/// Coefficient algebra, carrier basis when concrete, and the coefficient tensors.
inline Json encode(const Bimodule& x) {
  Json j{{"name", x.name()}, {"coefficient_algebra", encode(x.coeff())}, {"dim", x.dim()}};
  if (x.concrete()) j["carrier"] = encode(x.carrier().basis());
  j["left_action"] = encode(x.left_tensor());
  j["right_action"] = encode(x.right_tensor());
  j["left_inner"] = encode(x.left_inner_tensor());
  j["right_inner"] = encode(x.right_inner_tensor());
  if (x.has_involution()) {
    j["involution"] = encode(x.sharp_matrix());
    j["conjugate_linear"] = x.conjugate_linear();
  }
  return j;
}

inline CStarAlg decode_algebra(const Json& j, const std::string& path, const Tol& tol) {
  if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("basis")) fail(path, "expected {ambient_dim, basis}");
  const auto n = j.at("ambient_dim").get<Eigen::Index>();
  std::vector<Mat> basis = decode_matrices(j.at("basis"), path + ".basis");
  for (const Mat& m : basis)
    if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::DimensionMismatch, path + ": basis matrix is not n x n");
  return CStarAlg::from_spanning(n, basis, tol);
}

inline Bimodule decode_bimodule(const Json& j, const Tol& tol) {
  if (!j.is_object()) fail("bimodule", "expected an object");
  auto need = [&](const char* key) -> const Json& {
    if (!j.contains(key)) fail(std::string("bimodule.") + key, "missing");
    return j.at(key);
  };
  CStarAlg a = decode_algebra(need("coefficient_algebra"), "bimodule.coefficient_algebra", tol);
  std::optional<Mat> sharp;
  if (j.contains("involution")) sharp = decode_matrix(j.at("involution"), "bimodule.involution");
  return Bimodule::from_tensors(j.value("name", std::string("X")), a,
                                decode_matrices(need("left_action"), "bimodule.left_action"),
                                decode_matrices(need("right_action"), "bimodule.right_action"),
                                decode_matrices(need("left_inner"), "bimodule.left_inner"),
                                decode_matrices(need("right_inner"), "bimodule.right_inner"), sharp,
                                j.value("conjugate_linear", true));
}

inline Json encode(const TwoZInnerSystem& s) {
  return Json{{"algebra", encode(s.A)}, {"alpha", encode(s.alpha.matrix())}, {"z", encode(s.z)}};
}

}  // namespace indextwo::io
