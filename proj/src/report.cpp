#include "conflat/report.hpp"

namespace conflat {

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["suite"] = suite;
  j["seed"] = seed;
  j["environment"] = environment;
  j["checks"] = nlohmann::ordered_json::array();
  for (const CheckResult& c : checks) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["verdict"] = c.verdict;
    if (!c.error.empty()) jc["error"] = c.error;
    jc["measurements"] = nlohmann::ordered_json::array();
    for (const Measurement& m : c.measurements) {
      nlohmann::ordered_json jm;
      jm["name"] = m.name;
      jm["value"] = m.value;
      if (m.tolerance >= 0.0) {
        jm["tolerance"] = m.tolerance;
        jm["pass"] = m.pass;
      } else {
        jm["tolerance"] = nullptr;
        jm["pass"] = true;
      }
      jc["measurements"].push_back(std::move(jm));
    }
    j["checks"].push_back(std::move(jc));
  }
  j["all_pass"] = all_pass();
  return j;
}

}  // namespace conflat
