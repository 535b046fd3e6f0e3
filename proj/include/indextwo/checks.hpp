#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace indextwo {

/// One verified identity: its residual against the threshold it must meet.
struct Check {
  std::string name;
  std::string anchor;  // the identity being checked, in formula form
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

class CheckList {
 public:
  void add(std::string name, std::string anchor, double residual, double tolerance) {
    const bool ok = residual <= tolerance;
    checks_.push_back({std::move(name), std::move(anchor), residual, tolerance, ok});
  }

  /// Boolean facts are recorded as residual 0 (holds) or 1 (fails) against 0.5.
  void require(std::string name, std::string anchor, bool holds) {
    add(std::move(name), std::move(anchor), holds ? 0.0 : 1.0, 0.5);
  }

  void merge(const CheckList& other, const std::string& prefix = {}) {
    for (Check c : other.checks_) {
      if (!prefix.empty()) c.name = prefix + c.name;
      checks_.push_back(std::move(c));
    }
  }

  bool all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
  }

  const Check* find(const std::string& name) const {
    for (const Check& c : checks_)
      if (c.name == name) return &c;
    return nullptr;
  }

  bool passed(const std::string& name) const {
    const Check* c = find(name);
    return c != nullptr && c->pass;
  }

  double max_residual() const {
    double r = 0.0;
    for (const Check& c : checks_) r = std::max(r, c.residual);
    return r;
  }

  const std::vector<Check>& checks() const { return checks_; }
  std::size_t size() const { return checks_.size(); }
  bool empty() const { return checks_.empty(); }

 private:
  std::vector<Check> checks_;
};

}  // namespace indextwo
