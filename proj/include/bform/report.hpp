#pragma once

#include <string>
#include <vector>

namespace bform {

/// Outcome of one residual check: pass <=> max_residual <= tolerance.
struct CheckReport {
  std::string name;
  int trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  // e.g. "vacuous-pass" when a conditional premise fails

  static CheckReport make(std::string name, int trials, double max_residual,
                          double tolerance, std::string note = {}) {
    CheckReport r;
    r.name = std::move(name);
    r.trials = trials;
    r.max_residual = max_residual;
    r.tolerance = tolerance;
    r.pass = max_residual <= tolerance;
    r.note = std::move(note);
    return r;
  }
};

/// A bundle of related checks evaluated together.
struct IdentityReport {
  std::vector<CheckReport> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  const CheckReport* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

}  // namespace bform
