#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "indextwo/fixtures.hpp"
#include "indextwo/io/commands.hpp"

namespace {

using namespace indextwo;
using namespace indextwo::io;

const Tol kTol;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path data_dir() { return INDEXTWO_DATA_DIR; }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidExpectation;
}

Flags default_flags() { return Flags{kTol, ModelKind::Crossed, "Bminus"}; }

TEST(Codec, ScalarsAndMatrices) {
  Mat m = diag({1.0, Complex(0.5, -2.0)});
  Json j = encode(m);
  EXPECT_EQ(j.dump(), "[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[0.5,-2.0]]]");
  EXPECT_EQ(decode_matrix(j, "m"), m);
  // bare reals are accepted on input
  EXPECT_EQ(decode_matrix(Json::parse("[[1, 0], [0, 2]]"), "m"), diag({1.0, 2.0}));
  EXPECT_EQ(kind_of([] { decode_matrix(Json::parse("[[1, 0], [0]]"), "m"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { decode_matrix(Json::parse("[[[1, 2, 3]]]"), "m"); }), ErrorKind::ParseError);
}

TEST(ModelFile, ShippedFixBParses) {
  ModelFile f = parse_model_file(slurp(data_dir() / "fix-b.json"));
  EXPECT_EQ(f.ambient_dim, 2);
  ASSERT_TRUE(f.expectation);
  EXPECT_EQ(f.expectation->kind, ExpectationKind::Involution);
}

TEST(ModelFile, ShippedFilesRoundTripAndMatchCatalog) {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(data_dir())) {
    const std::string text = slurp(entry.path());
    ModelFile f = parse_model_file(text);
    EXPECT_EQ(parse_model_file(emit_model_file(f).dump()), f) << entry.path();
    EXPECT_EQ(emit_model_file(fixture_model(f.name)).dump(2) + "\n", text) << entry.path();
    ++seen;
  }
  EXPECT_EQ(seen, static_cast<int>(catalog_names().size()));
}

TEST(ModelFile, Errors) {
  EXPECT_EQ(kind_of([] { parse_model_file(""); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_model_file("  \n"); }), ErrorKind::ParseError);
  try {
    parse_model_file("{\n  \"ambient_dim\": 2,\n  \"name\": oops\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  const std::string three = "[[1,0,0],[0,1,0],[0,0,1]]";
  EXPECT_EQ(kind_of([&] {
              parse_model_file(R"({"ambient_dim": 2, "algebra_B": {"basis": [)" + three +
                               R"(]}, "expectation": {"kind": "involution", "unitary": [[1,0],[0,1]]}})");
            }),
            ErrorKind::DimensionMismatch);
  try {
    parse_model_file(R"({"ambient_dim": 2, "algebra_B": {"basis": [[[1,0],[0,1]]]}, "expectation": {"kind": "blocks"}})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("model.expectation.projections"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] {
              parse_model_file(R"({"ambient_dim": 2, "algebra_B": {"basis": [[[1,0],[0,1]]]},
                                   "expectation": {"kind": "weird"}})");
            }),
            ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_model_file(R"({"ambient_dim": 2})"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_model_file("[1, 2]"); }), ErrorKind::ParseError);
}

TEST(ModelFile, SuperoperatorMatchesInvolution) {
  Model a = instantiate(fixture_model("fix-a"), kTol);
  Model m = instantiate(fixture_model("fix-a-matrix"), kTol);
  ASSERT_TRUE(a.expectation && m.expectation);
  for (const Mat& b : a.expectation->source.basis()) EXPECT_LT(dist((*a.expectation)(b), (*m.expectation)(b)), 1e-12);
  EXPECT_TRUE(a.expectation->target.same_as(m.expectation->target, kTol));
}

TEST(ModelFile, SuperoperatorLeavingBIsRejected) {
  ModelFile f = fixture_model("fix-a-matrix");
  f.expectation->superoperator = superoperator_of(2, [](const Mat& x) -> Mat { return (unit(2, 0, 1) * x).eval(); });
  EXPECT_EQ(kind_of([&] { instantiate(f, kTol); }), ErrorKind::InvalidExpectation);
}

TEST(ModelFile, AlgebraAMustBeTheRange) {
  ModelFile f = fixture_model("fix-c");
  f.algebra_A->mats = matrix_units(3);
  EXPECT_EQ(kind_of([&] { instantiate(f, kTol); }), ErrorKind::InvalidExpectation);
}

TEST(ModelFile, GeneratorsCloseUnderProducts) {
  ModelFile f = fixture_model("fix-b");
  f.algebra_B = AlgebraSpec{true, {unit(2, 0, 1)}};
  Model m = instantiate(f, kTol);
  EXPECT_EQ(m.expectation->source.dim(), 4);
}

TEST(Bimodule, SerializationRoundTrip) {
  InclusionPair p = make_inclusion_pair(fixtures::fix_c(kTol), kTol);
  Bimodule x = build_Bminus(p, kTol);
  Bimodule y = decode_bimodule(Json::parse(encode(x).dump()), kTol);
  ASSERT_EQ(y.dim(), x.dim());
  for (std::size_t k = 0; k < x.left_tensor().size(); ++k) {
    EXPECT_LT(dist(x.left_tensor()[k], y.left_tensor()[k]), 1e-12);
    EXPECT_LT(dist(x.right_inner_tensor()[k], y.right_inner_tensor()[k]), 1e-12);
  }
  EXPECT_TRUE(verify_bimodule(y, kTol).all_pass());
}

TEST(Commands, IndexOnFixC) {
  Report r = run_command("index", fixture_model("fix-c"), default_flags());
  EXPECT_TRUE(r.pass());
  const Check* c = r.records.find("index_is_two");
  ASSERT_TRUE(c);
  EXPECT_LT(c->residual, 1e-9);
  EXPECT_EQ(r.data["index_eigenvalues"], Json::parse("[2.0, 2.0, 2.0]"));
}

TEST(Commands, IndexOnControl) {
  Report r = run_command("index", fixture_model("c3"), default_flags());
  EXPECT_FALSE(r.pass());
  EXPECT_EQ(r.data["index_eigenvalues"], Json::parse("[1.0, 2.0, 2.0]"));
  Report v = run_command("classify", fixture_model("c3"), default_flags());
  EXPECT_FALSE(v.pass());
  EXPECT_EQ(v.data["error"]["kind"], "IndexNotTwo");
}

TEST(Commands, ClassifyFixC) {
  Report r = run_command("classify", fixture_model("fix-c"), default_flags());
  EXPECT_TRUE(r.pass());
  const Json& c = r.data["conditions"];
  EXPECT_FALSE(c["projections_equivalent"].get<bool>());
  EXPECT_FALSE(c["quasi_basis_unitary"].get<bool>());
  EXPECT_FALSE(c["two_z_inner"].get<bool>());
  EXPECT_TRUE(r.data["consistent"].get<bool>());
  EXPECT_NE(r.data["block_ranks"]["jones"], r.data["block_ranks"]["co_jones"]);
}

TEST(Commands, ClassifyFixBCarriesWitness) {
  Report r = run_command("classify", fixture_model("fix-b"), default_flags());
  EXPECT_TRUE(r.pass());
  ASSERT_TRUE(r.data.contains("witness_u"));
  Mat u = decode_matrix(r.data["witness_u"], "u");
  EXPECT_LT(dist(u * u.adjoint(), identity(2)), 1e-9);
  EXPECT_LT(std::abs(u(0, 0)) + std::abs(u(1, 1)), 1e-9);  // E(u) = 0
}

TEST(Commands, RoundtripFixA) {
  Report r = run_command("roundtrip", fixture_model("fix-a"), default_flags());
  EXPECT_TRUE(r.pass());
  bool gf = false, fg = false;
  for (const Check& c : r.records.checks()) {
    gf = gf || c.name.rfind("GF.", 0) == 0;
    fg = fg || c.name.rfind("FG.", 0) == 0;
  }
  EXPECT_TRUE(gf && fg);
}

TEST(Commands, EveryCommandOnFixE) {
  for (const std::string& cmd : {"validate", "index", "basic", "bimodule", "roundtrip", "classify", "simplicity"}) {
    Flags f = default_flags();
    f.which = "Xalpha";
    Report r = run_command(cmd, fixture_model("fix-e"), f);
    EXPECT_TRUE(r.pass()) << cmd << "\n" << emit_report(r, "text");
  }
}

TEST(Commands, BimoduleChoices) {
  for (const char* which : {"XB", "Bminus", "Xalpha"}) {
    Flags f = default_flags();
    f.which = which;
    Report r = run_command("bimodule", fixture_model("fix-b"), f);
    EXPECT_TRUE(r.pass()) << which;
    EXPECT_EQ(r.data["bimodule"]["dim"], 2) << which;
  }
  Flags f = default_flags();
  f.which = "Xalpha";
  EXPECT_FALSE(run_command("bimodule", fixture_model("fix-c"), f).pass());
}

TEST(Report, EmptyReportIsValidJson) {
  Report r;
  r.command = "validate";
  Json j = Json::parse(emit_report(r, "json"));
  EXPECT_TRUE(j["records"].is_array());
  EXPECT_TRUE(j["records"].empty());
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_TRUE(j["summary"]["pass"].get<bool>());
}

TEST(Report, FormatsAgreeOnPassFail) {
  Flags f = default_flags();
  for (const char* name : {"fix-b", "c3"}) {
    Report r = run_command("report", fixture_model(name), f);
    Json j = Json::parse(emit_report(r, "json"));
    std::istringstream text(emit_report(r, "text"));
    std::vector<std::pair<std::string, bool>> from_text, from_json;
    for (std::string line; std::getline(text, line);) {
      if (line.rfind("PASS ", 0) == 0 || line.rfind("FAIL ", 0) == 0)
        from_text.emplace_back(line.substr(5, line.find("  ") - 5), line[0] == 'P');
    }
    for (const Json& rec : j["records"]) from_json.emplace_back(rec["name"].get<std::string>(), rec["pass"].get<bool>());
    EXPECT_EQ(from_text, from_json) << name;
    EXPECT_EQ(j["summary"]["pass"].get<bool>(), r.pass());
  }
}

TEST(Report, Deterministic) {
  Flags f = default_flags();
  for (const char* name : {"fix-d-1", "fix-e"}) {
    const std::string a = emit_report(run_command("report", fixture_model(name), f), "json");
    const std::string b = emit_report(run_command("report", fixture_model(name), f), "json");
    EXPECT_EQ(a, b) << name;
  }
}

TEST(Catalog, EveryEntryPassesFixtureCommand) {
  for (const std::string& name : catalog_names()) {
    Report r = run_command("fixture", fixture_model(name), default_flags());
    EXPECT_TRUE(r.pass()) << name;
  }
  EXPECT_EQ(kind_of([] { fixture_model("fix-d-x"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { fixture_model("nope"); }), ErrorKind::ParseError);
}

}  // namespace
