#pragma once

// Command pipelines behind the CLI. Each command turns a model into a Report;
// library errors become a failing "error" record.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "../correspondence.hpp"
#include "../dynamics.hpp"
#include "catalog.hpp"
#include "model_file.hpp"
#include "report.hpp"

namespace indextwo::io {

struct Flags {
  Tol tol;
  ModelKind model = ModelKind::Crossed;
  std::string which = "Bminus";
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "index",      "basic",   "bimodule", "roundtrip",
                                              "classify", "simplicity", "fixture", "report"};
  return names;
}

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "crossed") return ModelKind::Crossed;
  if (s == "qmat") return ModelKind::QMat;
  throw Error(ErrorKind::ParseError, "unknown model '" + s + "' (crossed, qmat)");
}

namespace detail {

inline Json summary(const CStarAlg& a, const Tol& tol) {
  BlockStructure bs = block_structure(a, tol);
  return Json{{"dim", a.dim()}, {"ambient_dim", a.ambient_dim()}, {"block_sizes", bs.block_sizes},
              {"multiplicities", bs.multiplicities}};
}

inline RealVec sorted_eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Rounds away float noise below 1e-12 so that reports print small values
/// the same way.
inline double clean(double x) { return std::abs(x) < 1e-12 ? 0.0 : x; }

inline Json encode_clean(const Mat& m) {
  Mat c = m;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j) c(i, j) = {clean(c(i, j).real()), clean(c(i, j).imag())};
  return encode(c);
}

inline InclusionPair pair_of(const Model& m) {
  if (m.expectation) return make_inclusion_pair(*m.expectation, m.tol);
  return restricted_crossed_model(*m.dynamics, m.tol).pair;
}

inline TwoZInnerSystem system_of(const Model& m) {
  if (m.dynamics) return *m.dynamics;
  ClassifyReport c = classify(pair_of(m), m.tol);
  if (!c.system) throw Error(ErrorKind::NotTwoZInner, "the inclusion is not a crossed product: no 2Z-inner system");
  return *c.system;
}

inline Bimodule bimodule_of(const Model& m, const Flags& f) {
  if (f.which == "XB") return build_XB(build_basic(pair_of(m), f.model, m.tol), m.tol);
  if (f.which == "Bminus") return build_Bminus(pair_of(m), m.tol);
  if (f.which == "Xalpha") return build_Xalpha(system_of(m), m.tol);
  throw Error(ErrorKind::ParseError, "unknown bimodule '" + f.which + "' (XB, Bminus, Xalpha)");
}

}  // namespace detail

inline void cmd_validate(const Model& m, const Flags&, Report& r) {
  if (m.expectation) {
    r.records.merge(validate_expectation(*m.expectation, m.tol), "E.");
    r.data["B"] = detail::summary(m.expectation->source, m.tol);
    r.data["A"] = detail::summary(m.expectation->target, m.tol);
    r.data["expectation_kind"] = to_string(m.expectation->kind);
  }
  if (m.dynamics) {
    r.records.merge(validate_two_z_inner(*m.dynamics, m.tol), "dynamics.");
    r.data["dynamics_algebra"] = detail::summary(m.dynamics->A, m.tol);
  }
}

inline void cmd_index(const Model& m, const Flags&, Report& r) {
  const CondExp e = m.expectation ? *m.expectation : detail::pair_of(m).E;
  IndexResult idx = watatani_index(e, m.tol);
  const double strict = m.tol.abs_eps, loose = 10.0 * m.tol.abs_eps;
  const Mat two = 2.0 * e.source.unit();
  r.records.add("index_central", "[Index E, b] = 0", idx.central_residual, loose);
  r.records.add("quasi_basis_reconstruction", "b = sum u_i E(v_i b) = sum E(b u_i) v_i", idx.reconstruction_residual,
                loose);
  r.records.add("seed_invariance", "Index E independent of the quasi-basis", idx.seed_residual, loose);
  r.records.add("index_is_two", "Index E = 2.1", (idx.value - two).norm(), strict);
  RealVec ev = detail::sorted_eigenvalues(idx.value);
  std::vector<double> evs;
  for (Eigen::Index k = 0; k < ev.size(); ++k) evs.push_back(std::round(ev(k) * 1e9) / 1e9);
  r.data["index"] = detail::encode_clean(idx.value);
  r.data["index_eigenvalues"] = evs;
  r.data["quasi_basis_size"] = idx.quasi_basis.pairs.size();
}

inline void cmd_basic(const Model& m, const Flags& f, Report& r) {
  InclusionPair p = detail::pair_of(m);
  BasicConstruction c = build_basic(p, f.model, m.tol);
  r.records.merge(verify_basic(c, m.tol));
  CutExpectation cut = cut_expectation_F(c, m.tol);
  r.records.merge(cut.checks, "F.");
  r.records.merge(corner_is_A(c, m.tol), "corner.");
  r.records.merge(fixed_points_of_flip(c, m.tol).checks, "flip_fixed.");
  r.records.require("reduction_unique", "x e_A = b e_A determines b", reduction_unique(c, m.tol));
  r.data["model"] = to_string(c.kind);
  r.data["algebra"] = detail::summary(c.algebra, m.tol);
  r.data["jones"] = detail::encode_clean(c.jones);
  r.data["index_F"] = detail::encode_clean(cut.index);
}

inline void cmd_bimodule(const Model& m, const Flags& f, Report& r) {
  Bimodule x = detail::bimodule_of(m, f);
  r.records.merge(verify_bimodule(x, m.tol));
  r.data["which"] = f.which;
  r.data["bimodule"] = encode(x);
}

inline void cmd_roundtrip(const Model& m, const Flags& f, Report& r) {
  InclusionPair p = detail::pair_of(m);
  RoundTrip gf = roundtrip_GF(p, m.tol);
  r.records.merge(gf.checks, "GF.");
  Bimodule x = detail::bimodule_of(m, f);
  RoundTrip fg = roundtrip_FG(x, m.tol);
  r.records.merge(fg.checks, "FG.");
  GResult g = functor_G(x, m.tol);
  r.records.merge(verify_linking(g, m.tol), "G.");
  r.data["B"] = detail::summary(p.B, m.tol);
  r.data["which"] = f.which;
  r.data["bimodule_dim"] = x.dim();
  r.data["G_of_X"] = detail::summary(g.pair.B, m.tol);
}

inline void cmd_classify(const Model& m, const Flags&, Report& r) {
  InclusionPair p = detail::pair_of(m);
  ClassifyReport c = classify(p, m.tol);
  r.records.merge(c.checks);
  r.records.require("consistent", "(1), (2), (3) and the direct search agree", c.consistent);
  BasicConstruction bc = crossed_model(p, m.tol);
  BlockStructure bs = block_structure(bc.algebra, m.tol);
  r.data["conditions"] = Json{{"projections_equivalent", c.projections.equivalent},
                              {"quasi_basis_unitary", c.unitary.has_value()},
                              {"two_z_inner", c.system.has_value()},
                              {"direct_search", c.direct_unitary.has_value()}};
  r.data["consistent"] = c.consistent;
  r.data["block_ranks"] = Json{{"jones", block_ranks(bc.algebra, bs, bc.jones, m.tol)},
                               {"co_jones", block_ranks(bc.algebra, bs, bc.co_jones(), m.tol)}};
  if (c.unitary) r.data["witness_u"] = detail::encode_clean(*c.unitary);
  if (c.system) {
    r.data["z"] = detail::encode_clean(c.system->z);
    r.data["alpha"] = detail::encode_clean(c.system->alpha.matrix());
  }
}

inline void cmd_simplicity(const Model& m, const Flags&, Report& r) {
  TwoZInnerSystem sys = detail::system_of(m);
  SimplicityReport s = simplicity_conditions(sys, m.tol);
  if (s.applicable) r.records.require("consistent", "(1) <=> (2) <=> (3) <=> (4) for simple A", s.consistent);
  CommutantDims cd = commutant_anti_isomorphism_check(detail::pair_of(m), m.tol);
  r.records.merge(cd.checks, "commutants.");
  r.data["applicable"] = s.applicable;
  r.data["conditions"] = Json{{"B_simple", s.b_simple},
                              {"relative_commutant_trivial", s.relative_commutant_trivial},
                              {"linking_commutant_trivial", s.linking_commutant_trivial},
                              {"alpha_outer", s.outer}};
  r.data["dims"] = Json{{"center", s.center_dim},
                        {"relative_commutant", s.relative_commutant_dim},
                        {"linking_commutant", s.linking_commutant_dim}};
  r.data["commutant_dims"] = Json{{"relative", cd.relative}, {"dual", cd.dual}};
  if (s.implementer) r.data["implementer"] = detail::encode_clean(*s.implementer);
}

/// The fixture command checks that a catalog entry round-trips through its
/// model file and instantiates.
inline void cmd_fixture(const ModelFile& f, const Tol& tol, Report& r) {
  const Json j = emit_model_file(f);
  r.records.require("roundtrip_stable", "parse(emit(f)) = f", parse_model_file(j.dump()) == f);
  instantiate(f, tol);
  r.records.require("instantiates", "model builds", true);
  r.data["model"] = j;
}

inline void record_error(const Error& e, Report& r) {
  r.records.require("error", e.what(), false);
  Json err{{"kind", to_string(e.kind())}, {"message", e.what()}};
  if (const auto* nt = dynamic_cast<const IndexNotTwoError*>(&e)) err["index"] = detail::encode_clean(nt->index());
  r.data["error"] = std::move(err);
}

using CommandFn = std::function<void(const Model&, const Flags&, Report&)>;

inline CommandFn command_fn(const std::string& cmd) {
  if (cmd == "validate") return cmd_validate;
  if (cmd == "index") return cmd_index;
  if (cmd == "basic") return cmd_basic;
  if (cmd == "bimodule") return cmd_bimodule;
  if (cmd == "roundtrip") return cmd_roundtrip;
  if (cmd == "classify") return cmd_classify;
  if (cmd == "simplicity") return cmd_simplicity;
  throw Error(ErrorKind::ParseError, "unknown command '" + cmd + "'");
}

/// The full suite with records prefixed by command; simplicity only when the
/// model carries dynamics.
inline void cmd_report(const Model& m, const Flags& f, Report& r) {
  std::vector<std::string> parts{"validate", "index", "basic", "bimodule", "roundtrip", "classify"};
  if (m.dynamics) parts.push_back("simplicity");
  for (const std::string& part : parts) {
    Report sub;
    try {
      command_fn(part)(m, f, sub);
    } catch (const Error& e) {
      record_error(e, sub);
    }
    r.records.merge(sub.records, part + ".");
    r.data[part] = sub.data;
  }
}

/// Runs a model-based command; fixture is handled by the caller.
inline Report run_command(const std::string& cmd, const ModelFile& file, const Flags& flags) {
  Report r;
  r.command = cmd;
  r.fixture = file.name;
  try {
    Model m = instantiate(file, flags.tol);
    if (cmd == "report")
      cmd_report(m, flags, r);
    else if (cmd == "fixture")
      cmd_fixture(file, flags.tol, r);
    else
      command_fn(cmd)(m, flags, r);
  } catch (const Error& e) {
    record_error(e, r);
  }
  return r;
}

}  // namespace indextwo::io
