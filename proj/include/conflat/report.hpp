#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace conflat {

// tolerance < 0 marks a recorded-only measurement (no verdict of its own).
struct Measurement {
  std::string name;
  double value = 0.0;
  double tolerance = -1.0;
  bool pass = true;
};

inline Measurement checked(const std::string& name, double value, double tol) {
  return {name, value, tol, value <= tol};
}

inline Measurement recorded(const std::string& name, double value) {
  return {name, value, -1.0, true};
}

struct CheckResult {
  std::string id;
  std::vector<Measurement> measurements;
  std::string verdict;  // "pass", "fail", "error"
  std::string error;
  double runtime_sec = 0.0;  // console diagnostics only, never serialized

  void finalize() {
    if (!error.empty()) {
      verdict = "error";
      return;
    }
    verdict = "pass";
    for (const Measurement& m : measurements)
      if (!m.pass) verdict = "fail";
  }
  bool passed() const { return verdict == "pass"; }
};

struct VerificationReport {
  int schema_version = 1;
  std::string suite;
  std::uint64_t seed = 0;
  nlohmann::ordered_json environment;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (const CheckResult& c : checks)
      if (!c.passed()) return false;
    return true;
  }

  // Deterministic for a fixed config and seed: runtimes are deliberately
  // excluded so two runs serialize byte-identically.
  nlohmann::ordered_json to_json() const;
  std::string dump() const { return to_json().dump(2) + "\n"; }
};

}  // namespace conflat
