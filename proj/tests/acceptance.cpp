// Acceptance suite: one line per criterion, exit status 0 iff all pass.
// Residuals are recomputed here from the library's outputs, not read off its
// own check lists, wherever that is cheap.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "indextwo/indextwo.hpp"

namespace {

using namespace indextwo;
using Clock = std::chrono::steady_clock;

const Tol kTol;

struct Outcome {
  bool pass = true;
  double residual = 0.0;
  std::string note;

  void need(bool ok, const std::string& why) {
    if (!ok && pass) note = why;
    pass = pass && ok;
  }
  void bound(double r, double tol, const std::string& what) {
    residual = std::max(residual, r);
    need(r < tol, what + " residual " + std::to_string(r));
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Named {
  std::string name;
  InclusionPair pair;
};

std::vector<Named> fixture_pairs() {
  using namespace fixtures;
  std::vector<Named> out;
  out.push_back({"fix-a", make_inclusion_pair(fix_a(kTol), kTol)});
  out.push_back({"fix-b", make_inclusion_pair(fix_b(kTol), kTol)});
  out.push_back({"fix-c", make_inclusion_pair(fix_c(kTol), kTol)});
  for (std::uint64_t s = 0; s < 3; ++s)
    out.push_back({"fix-d-" + std::to_string(s), make_inclusion_pair(fix_d(s, kTol), kTol)});
  out.push_back({"fix-e", restricted_crossed_model(fix_e(kTol), kTol).pair});
  return out;
}

double max_residual(const CheckList& l) {
  double r = 0.0;
  for (const Check& c : l.checks())
    if (c.tolerance != 0.5) r = std::max(r, c.residual);  // skip boolean records
  return r;
}

std::string first_failure(const CheckList& l) {
  for (const Check& c : l.checks())
    if (!c.pass) return c.name;
  return {};
}

void absorb(Outcome& o, const CheckList& l, double tol, const std::string& where) {
  o.need(l.all_pass(), where + ": " + first_failure(l));
  o.bound(max_residual(l), tol, where);
}

// 1
Outcome index_criterion() {
  Outcome o;
  for (const auto& e : {fixtures::fix_a(kTol), fixtures::fix_b(kTol), fixtures::fix_c(kTol),
                        restricted_crossed_model(fixtures::fix_e(kTol), kTol).pair.E}) {
    const auto t0 = Clock::now();
    IndexResult r = watatani_index(e, kTol);
    o.bound((r.value - 2.0 * e.source.unit()).norm(), 1e-9, "index");
    o.need(seconds_since(t0) < 1.0, "index runtime");
  }
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto t0 = Clock::now();
    CondExp e = fixtures::fix_d(s, kTol);
    o.bound((watatani_index(e, kTol).value - 2.0 * e.source.unit()).norm(), 1e-9, "FIX-D index");
    o.need(seconds_since(t0) < 1.0, "FIX-D index runtime");
  }
  CondExp c3 = fixtures::c3_control(kTol);
  IndexResult r = watatani_index(c3, kTol);
  o.need((r.value - diag({2.0, 2.0, 1.0})).norm() < 1e-9, "C3 index is not diag(2, 2, 1)");
  bool rejected = false;
  try {
    make_inclusion_pair(c3, kTol);
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::IndexNotTwo;
  }
  o.need(rejected, "C3 control accepted");
  return o;
}

// 2
Outcome jones_unitary_criterion(const std::vector<Named>& fx) {
  Outcome o;
  for (const auto& [name, p] : fx) {
    BasicConstruction c = crossed_model(p, kTol);
    const Mat& u = c.unitary_U;
    o.bound((u * u - c.one()).norm(), 1e-9, name + " U^2");
    for (const Mat& b : p.B.basis())
      o.bound((u * c.embed(b) * u.adjoint() - c.embed(2.0 * p.E(b) - b)).norm(), 1e-9, name + " UbU*");
  }
  return o;
}

// 3
Outcome cut_down_criterion(const std::vector<Named>& fx) {
  Outcome o;
  for (const auto& [name, p] : fx) {
    for (ModelKind kind : {ModelKind::Crossed, ModelKind::QMat}) {
      if (kind == ModelKind::QMat && p.B.ambient_dim() > 3) continue;
      BasicConstruction c = build_basic(p, kind, kTol);
      const Mat e = c.jones, co = c.co_jones();
      for (const Mat& b : p.B.basis()) {
        const Mat eb = c.embed(p.E(b));
        o.bound((co * c.embed(b) * co - eb * co).norm(), 1e-9, name + " (1-e)b(1-e)");
        o.bound((e * c.embed(b) * e - eb * e).norm(), 1e-9, name + " e b e");
      }
      CheckList corner = corner_is_A(c, kTol);
      o.need(corner.all_pass(), name + " corner: " + first_failure(corner));
    }
  }
  return o;
}

// 4
Outcome cut_expectation_criterion(const std::vector<Named>& fx) {
  Outcome o;
  for (const auto& [name, p] : fx) {
    BasicConstruction c = crossed_model(p, kTol);
    CutExpectation f = cut_expectation_F(c, kTol);
    double right = 0.0, left = 0.0;
    for (const Mat& y : f.corner.basis()) {
      Mat r = Mat::Zero(y.rows(), y.cols()), l = r;
      for (const auto& [u, v] : f.quasi_basis.pairs) {
        r += u * f.map(v * y);
        l += f.map(y * u) * v;
      }
      right = std::max(right, (r - y).norm());
      left = std::max(left, (l - y).norm());
    }
    Mat index = Mat::Zero(c.one().rows(), c.one().cols());
    for (const auto& [u, v] : f.quasi_basis.pairs) index += u * v;
    o.bound(right, 1e-8, name + " F right");
    o.bound(left, 1e-8, name + " F left");
    o.bound((index - c.co_jones()).norm(), 1e-8, name + " Index F");
  }
  return o;
}

// 5
Outcome model_iso_criterion(const std::vector<Named>& fx) {
  Outcome o;
  for (const auto& [name, p] : fx) {
    BasicConstruction a = crossed_model(p, kTol), b = q_model(p, kTol);
    ModelIso iso = check_models_isomorphic(a, b, kTol);
    absorb(o, iso.checks, 1e-8, name);
    // fixes B and e_A
    for (const Mat& x : p.B.basis()) o.bound((iso.map(a.embed(x)) - b.embed(x)).norm(), 1e-8, name + " fixes B");
    o.bound((iso.map(a.jones) - b.jones).norm(), 1e-8, name + " fixes e_A");
  }
  return o;
}

// 6
Outcome flip_criterion(const std::vector<Named>& fx) {
  Outcome o;
  for (const auto& [name, p] : fx) {
    BasicConstruction c = crossed_model(p, kTol);
    FlipFixedPoints f = fixed_points_of_flip(c, kTol);
    o.need(f.fixed.dim() == p.B.dim(), name + " dim C^flip != dim B");
    std::vector<Mat> images;
    for (const Mat& b : p.B.basis()) images.push_back(c.embed(b));
    Subspace emb = Subspace::from_spanning(c.algebra.ambient_dim(), c.algebra.ambient_dim(), images, kTol);
    for (const Mat& x : f.fixed.basis()) o.bound(emb.residual(x), 1e-9, name + " fixed in B");
    for (const Mat& b : images) o.bound(f.fixed.residual(b), 1e-9, name + " B in fixed");
  }
  return o;
}

std::vector<std::pair<std::string, Bimodule>> fixture_bimodules(const std::vector<Named>& fx) {
  std::vector<std::pair<std::string, Bimodule>> out;
  for (const auto& [name, p] : fx) {
    out.emplace_back(name + "/XB", build_XB(crossed_model(p, kTol), kTol));
    out.emplace_back(name + "/Bminus", build_Bminus(p, kTol));
    ClassifyReport cr = classify(p, kTol);
    if (cr.system) out.emplace_back(name + "/Xalpha", build_Xalpha(*cr.system, kTol));
  }
  out.emplace_back("fix-e/Xalpha", build_Xalpha(fixtures::fix_e(kTol), kTol));
  return out;
}

// 7
Outcome bimodule_criterion(const std::vector<std::pair<std::string, Bimodule>>& mods) {
  Outcome o;
  for (const auto& [name, x] : mods) absorb(o, verify_bimodule(x, kTol), 1e-9, name);
  for (const auto& [name, x] : mods) {
    if (x.dim() == 0) continue;
    Bimodule doubled = x.with_sharp(Mat(2.0 * x.sharp_matrix()), x.conjugate_linear());
    Bimodule linear = x.with_sharp(x.sharp_matrix(), !x.conjugate_linear());
    o.need(!verify_bimodule(doubled, kTol).all_pass(), name + " doubled involution accepted");
    if (!x.coeff().basis().empty())
      o.need(!verify_bimodule(linear, kTol).all_pass() || x.dim() == 0, name + " linear involution accepted");
  }
  return o;
}

// 8
Outcome linking_index_criterion(const std::vector<std::pair<std::string, Bimodule>>& mods) {
  Outcome o;
  auto check = [&](const std::string& name, const Bimodule& x) {
    GResult g = functor_G(x, kTol);
    IndexResult r = watatani_index(g.pair.E, kTol);
    o.bound((r.value - 2.0 * g.pair.B.unit()).norm(), 1e-8, name + " Index E_X");
  };
  for (const auto& [name, x] : mods) check(name, x);
  for (std::uint64_t s = 0; s < 20; ++s)
    check("fix-d-" + std::to_string(s), build_Bminus(make_inclusion_pair(fixtures::fix_d(s, kTol), kTol), kTol));
  return o;
}

// 9
Outcome roundtrip_criterion(const std::vector<Named>& fx, const std::vector<std::pair<std::string, Bimodule>>& mods,
                            double& elapsed) {
  Outcome o;
  const auto t0 = Clock::now();
  for (const auto& [name, p] : fx) absorb(o, roundtrip_GF(p, kTol).checks, 1e-8, name + " GF");
  for (const auto& [name, x] : mods) absorb(o, roundtrip_FG(x, kTol).checks, 1e-8, name + " FG");
  elapsed = seconds_since(t0);
  o.need(elapsed < 10.0, "round-trip suite took " + std::to_string(elapsed) + " s");
  return o;
}

bool ranks_swapped(const std::vector<int>& e, const std::vector<int>& co) {
  std::vector<int> rev(co.rbegin(), co.rend());
  std::vector<int> sorted = e;
  std::sort(sorted.begin(), sorted.end());
  return e == rev && e != co && sorted == std::vector<int>{1, 2};
}

// 10
Outcome trichotomy_criterion() {
  Outcome o;
  for (const auto& [name, e] : {std::pair{"fix-a", fixtures::fix_a(kTol)}, std::pair{"fix-b", fixtures::fix_b(kTol)}}) {
    InclusionPair p = make_inclusion_pair(e, kTol);
    ClassifyReport r = classify(p, kTol);
    o.need(r.projections.equivalent && r.unitary && r.system && r.consistent, std::string(name) + " not all true");
    if (!r.unitary || !r.system) continue;
    const Mat& u = *r.unitary;
    const Mat one = p.B.unit();
    o.bound(std::max((u * u.adjoint() - one).norm(), (u.adjoint() * u - one).norm()), 1e-9, "u unitary");
    o.bound(p.E(u).norm(), 1e-9, "E(u)");
    for (const Mat& b : p.B.basis()) {
      o.bound((p.E(b) + u * p.E(u.adjoint() * b) - b).norm(), 1e-9, "right reconstruction");
      o.bound((p.E(b) + p.E(b * u) * u.adjoint() - b).norm(), 1e-9, "left reconstruction");
    }
    absorb(o, validate_two_z_inner(*r.system, kTol), 1e-9, std::string(name) + " 2Z-inner");
  }
  InclusionPair c = make_inclusion_pair(fixtures::fix_c(kTol), kTol);
  ClassifyReport rc = classify(c, kTol);
  o.need(!rc.projections.equivalent && !rc.unitary && !rc.system && !rc.direct_unitary && rc.consistent,
         "fix-c not all false");
  BasicConstruction bc = crossed_model(c, kTol);
  o.need(ranks_swapped(block_ranks(bc.algebra, bc.jones, kTol), block_ranks(bc.algebra, bc.co_jones(), kTol)),
         "fix-c block ranks");
  for (std::uint64_t s = 0; s < 20; ++s)
    o.need(classify(make_inclusion_pair(fixtures::fix_d(s, kTol), kTol), kTol).consistent,
           "fix-d-" + std::to_string(s) + " inconsistent");
  return o;
}

// 11
Outcome restricted_model_criterion() {
  Outcome o;
  RestrictedModel r = restricted_crossed_model(fixtures::fix_e(kTol), kTol);
  absorb(o, r.checks, 1e-8, "Phi");
  // Phi against functor_G(X_alpha) on products, recomputed here
  const InclusionPair& g = r.g.pair;
  for (const Mat& x : r.pair.B.basis())
    for (const Mat& y : r.pair.B.basis()) o.bound((r.phi(x * y) - r.phi(x) * r.phi(y)).norm(), 1e-8, "Phi product");
  for (const Mat& a : r.pair.A.basis()) o.need(g.A.residual(r.phi(a)) < 1e-8, "Phi(A) not in A");
  o.need(r.phi.matrix().rows() == r.phi.matrix().cols() &&
             r.phi.matrix().fullPivLu().rank() == r.phi.matrix().rows(),
         "Phi not bijective");
  return o;
}

// 12
Outcome goldman_criterion() {
  Outcome o;
  InclusionPair p = make_inclusion_pair(fixtures::fix_c(kTol), kTol);
  o.bound((p.index - 2.0 * p.B.unit()).norm(), 1e-9, "fix-c index");
  BasicConstruction c = crossed_model(p, kTol);
  const double n = static_cast<double>(c.algebra.ambient_dim());
  o.bound(std::abs(c.jones.trace().real() / n - 0.5), 1e-9, "tau(e_A)");
  o.bound(std::abs(c.co_jones().trace().real() / n - 0.5), 1e-9, "tau(1 - e_A)");
  o.need(block_ranks(c.algebra, c.jones, kTol) != block_ranks(c.algebra, c.co_jones(), kTol), "block ranks agree");
  o.need(!classify(p, kTol).projections.equivalent, "classify reports e_A ~ 1 - e_A");
  return o;
}

std::string run_capture(const std::string& cmd) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return {};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe.get())) out.append(buf.data(), n);
  return out;
}

// 13
Outcome determinism_criterion() {
  Outcome o;
  const std::string cli = INDEXTWO_CLI;
  for (const char* args : {"report --fixture fix-d --seed 7 --tol 1e-9", "classify --fixture fix-b --seed 3 --tol 1e-9",
                           "report --fixture fix-e --which Xalpha --seed 11 --tol 1e-9"}) {
    const std::string cmd = cli + " " + args + " --format json";
    const std::string a = run_capture(cmd), b = run_capture(cmd);
    o.need(!a.empty() && a == b, std::string("outputs differ: ") + args);
  }
  return o;
}

}  // namespace

int main() {
  bool all = true;
  auto line = [&](int id, const std::string& what, double tol, const std::function<Outcome()>& run) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s  %2d  %-58s max_residual=%.2e tol=%.0e  %.2fs", o.pass ? "PASS" : "FAIL", id,
                  what.c_str(), o.residual, tol, seconds_since(t0));
    std::cout << buf << (o.note.empty() ? "" : "  (" + o.note + ")") << std::endl;
  };

  const std::vector<Named> fx = fixture_pairs();
  const auto mods = fixture_bimodules(fx);
  double roundtrip_seconds = 0.0;

  line(1, "Index E = 2.1 on fixtures; C3 control rejected", 1e-9, index_criterion);
  line(2, "U^2 = 1 and U b U* = 2E(b) - b", 1e-9, [&] { return jones_unitary_criterion(fx); });
  line(3, "cut-down identities and corner = A", 1e-9, [&] { return cut_down_criterion(fx); });
  line(4, "quasi-basis of F reconstructs, Index F = 1 - e_A", 1e-8, [&] { return cut_expectation_criterion(fx); });
  line(5, "crossed model = q model, fixing B and e_A", 1e-8, [&] { return model_iso_criterion(fx); });
  line(6, "fixed algebra of the dual flip is B", 1e-9, [&] { return flip_criterion(fx); });
  line(7, "bimodule axioms for X_B, B_-, X_alpha; mutations fail", 1e-9, [&] { return bimodule_criterion(mods); });
  line(8, "Index E_X = 2.1 for G of every bimodule", 1e-8, [&] { return linking_index_criterion(mods); });
  line(9, "round trips G F and F G", 1e-8, [&] { return roundtrip_criterion(fx, mods, roundtrip_seconds); });
  line(10, "trichotomy: A, B all true; C all false; D consistent", 1e-9, trichotomy_criterion);
  line(11, "restricted crossed model = G(X_alpha) via Phi", 1e-8, restricted_model_criterion);
  line(12, "FIX-C: index 2, equal traces, e_A not ~ 1 - e_A", 1e-9, goldman_criterion);
  line(13, "byte-identical json for identical --seed/--tol", 0.0, determinism_criterion);
  std::cout << (all ? "ALL PASS" : "FAILURES") << std::endl;
  return all ? 0 : 1;
}
