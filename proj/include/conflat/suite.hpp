#pragma once

#include <iosfwd>

#include "conflat/kernel_spec.hpp"
#include "conflat/report.hpp"

namespace conflat {

struct SuiteConfig {
  std::string suite = "default";
  std::vector<std::string> checks;  // empty = all
  std::uint64_t seed = 0;           // 0 = env/default
};

// Parses {"suite": ..., "checks": [...], "seed": ...}; unknown fields are
// rejected with a JSON-pointer diagnostic.
SuiteConfig suite_config_from_json(const nlohmann::json& j);

const std::vector<std::string>& default_check_ids();

// Runs the named checks; a crashing check is recorded with verdict "error"
// and the suite continues.
VerificationReport run_suite(const SuiteConfig& config);
VerificationReport run_suite(const nlohmann::json& config_json);

struct ConvergenceRow {
  int radius = 0;
  std::vector<double> components;
  double delta = 0.0;      // distance to the largest-radius value
  double est_order = 0.0;  // log-log slope against the previous row
};

struct ConvergenceStudy {
  std::vector<std::string> columns;  // blade names of the reported components
  std::vector<ConvergenceRow> rows;
  double predicted_order = 0.0;
  // least-squares log-log slope of delta vs radius over all but the last row
  double fitted_order = 0.0;
};

ConvergenceStudy convergence_study(const KernelSpec& spec, const Vec& x,
                                   const Vec& y, const std::vector<int>& radii);

void write_csv(const ConvergenceStudy& study, std::ostream& os);

}  // namespace conflat
