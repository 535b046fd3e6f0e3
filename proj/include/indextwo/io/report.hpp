#pragma once

// Command reports: per-check records plus free-form data, emitted as JSON or
// as one line per record.

#include <cstdio>
#include <string>

#include "json_codec.hpp"

namespace indextwo::io {

inline constexpr const char* kSchemaVersion = "indextwo.report/1";

struct Report {
  std::string command;
  std::string fixture;
  CheckList records;
  Json data = Json::object();

  bool pass() const { return records.all_pass(); }
};

inline Json report_json(const Report& r) {
  std::size_t passed = 0;
  for (const Check& c : r.records.checks()) passed += c.pass ? 1 : 0;
  const std::size_t total = r.records.checks().size();
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = r.command;
  j["fixture"] = r.fixture;
  j["records"] = encode(r.records);
  j["summary"] = Json{{"total", total}, {"passed", passed}, {"failed", total - passed}, {"pass", r.pass()}};
  j["data"] = r.data;
  return j;
}

inline std::string format_residual(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline std::string emit_report(const Report& r, const std::string& format) {
  if (format == "json") return report_json(r).dump(2) + "\n";
  if (format != "text") throw Error(ErrorKind::ParseError, "unknown format '" + format + "' (json, text)");
  std::string out = "command: " + r.command + "\nfixture: " + r.fixture + "\n";
  std::size_t passed = 0;
  for (const Check& c : r.records.checks()) {
    passed += c.pass ? 1 : 0;
    out += std::string(c.pass ? "PASS " : "FAIL ") + c.name + "  residual=" + format_residual(c.residual) +
           " tolerance=" + format_residual(c.tolerance) + "  [" + c.anchor + "]\n";
  }
  out += "summary: " + std::to_string(passed) + "/" + std::to_string(r.records.checks().size()) + " passed, " +
         (r.pass() ? "PASS" : "FAIL") + "\n";
  out += "data: " + r.data.dump() + "\n";
  return out;
}

}  // namespace indextwo::io
