// indextwo: run checks on a model file or a shipped fixture and print a report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "indextwo/io/commands.hpp"

namespace {

using namespace indextwo;
using namespace indextwo::io;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const Report& r, const std::string& format) {
  std::cout << emit_report(r, format);
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Index-2 inclusions, involutive bimodules and their correspondence."};
  std::string command, model_path, fixture, format = "json", model_kind = "crossed", which = "Bminus", out_dir;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool all = false;

  app.add_option("command", command, "validate | index | basic | bimodule | roundtrip | classify | simplicity | "
                                     "fixture | report")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("file", model_path, "model file (JSON); for 'fixture', the catalog name");
  app.add_option("--fixture", fixture, "use a shipped fixture instead of a file (fix-d takes --seed)");
  app.add_option("--tol", tol, "absolute and relative tolerance (default: the model's, 1e-9)");
  app.add_option("--seed", seed, "RNG seed; also selects the fix-d instance (default: the model's)");
  app.add_option("--format", format, "json | text")->capture_default_str()->check(CLI::IsMember({"json", "text"}));
  app.add_option("--model", model_kind, "basic construction model: crossed | qmat")
      ->capture_default_str()
      ->check(CLI::IsMember({"crossed", "qmat"}));
  app.add_option("--which", which, "bimodule: XB | Bminus | Xalpha")
      ->capture_default_str()
      ->check(CLI::IsMember({"XB", "Bminus", "Xalpha"}));
  app.add_flag("--all", all, "fixture: every catalog entry");
  app.add_option("--out", out_dir, "fixture: write model files into this directory");
  CLI11_PARSE(app, argc, argv);

  auto effective_tol = [&](Tol t) {
    if (tol) t.abs_eps = t.rel_eps = *tol;
    if (seed) t.rng_seed = *seed;
    t.validate();
    return t;
  };
  auto fixture_name = [&](std::string name) {
    if (name == "fix-d") name += "-" + std::to_string(seed.value_or(0));
    return name;
  };

  try {
    if (command == "fixture") {
      std::vector<std::string> names;
      if (all) names = catalog_names();
      else if (!model_path.empty() || !fixture.empty()) names.push_back(fixture_name(model_path.empty() ? fixture : model_path));
      else throw Error(ErrorKind::ParseError, "fixture: give a name or --all");
      Report r;
      r.command = "fixture";
      r.fixture = all ? "all" : names.front();
      for (const std::string& name : names) {
        ModelFile f = fixture_model(name);
        Report sub;
        cmd_fixture(f, effective_tol(f.tolerance), sub);
        r.records.merge(sub.records, name + ".");
        if (!out_dir.empty()) {
          std::filesystem::create_directories(out_dir);
          std::ofstream(std::filesystem::path(out_dir) / (name + ".json")) << emit_model_file(f).dump(2) << "\n";
        }
        if (!all) r.data = sub.data;
      }
      if (all) r.data["fixtures"] = names;
      return emit(r, format);
    }

    ModelFile file;
    if (!model_path.empty()) file = parse_model_file(read_file(model_path));
    else if (!fixture.empty()) file = fixture_model(fixture_name(fixture));
    else throw Error(ErrorKind::ParseError, "give a model file or --fixture");

    Flags flags;
    flags.tol = effective_tol(file.tolerance);
    flags.model = parse_model_kind(model_kind);
    flags.which = which;
    return emit(run_command(command, file, flags), format);
  } catch (const Error& e) {
    Report r;
    r.command = command;
    r.fixture = model_path.empty() ? fixture : model_path;
    record_error(e, r);
    emit(r, format);
    return 1;
  }
}
