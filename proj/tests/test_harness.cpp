#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "conflat/kernels.hpp"
#include "conflat/suite.hpp"

using namespace conflat;

TEST_CASE("kernel spec JSON round trip") {
  KernelSpec spec;
  spec.family = KernelFamily::cot;
  spec.n = 4;
  spec.q = 1;
  spec.k = 2;
  spec.l = 1;
  spec.trunc.radius = 25;
  KernelSpec back = kernel_spec_from_json(to_json(spec));
  CHECK(back.family == KernelFamily::cot);
  CHECK(back.n == 4);
  CHECK(back.k == 2);
  CHECK(back.l == 1);
  CHECK(back.trunc.radius == 25);
}

TEST_CASE("kernel spec rejects unknown fields with a pointer") {
  nlohmann::json j = {{"family", "cot"}, {"n", 3}, {"k", 1}, {"bogus", 7}};
  CHECK_THROWS_WITH_AS(kernel_spec_from_json(j, "/spec"),
                       doctest::Contains("/spec/bogus"), std::invalid_argument);
  nlohmann::json jt = {{"family", "cot"},
                       {"n", 3},
                       {"k", 1},
                       {"trunc", {{"radius", 10}, {"oops", 1}}}};
  CHECK_THROWS_WITH_AS(kernel_spec_from_json(jt, ""),
                       doctest::Contains("/trunc/oops"), std::invalid_argument);
}

TEST_CASE("kernel spec invariants") {
  nlohmann::json j = {{"family", "cot"}, {"n", 3}, {"k", 1}, {"l", 2}};
  CHECK_THROWS_AS(kernel_spec_from_json(j), std::invalid_argument);
  // supercritical with congruent a, b
  nlohmann::json j2 = {{"family", "cot"}, {"n", 3},
                       {"q", 2},          {"k", 2},
                       {"a", {0.5, 0.0, 0.0}}, {"b", {-0.5, 1.0, 0.0}}};
  CHECK_THROWS_AS(kernel_spec_from_json(j2), std::invalid_argument);
}

TEST_CASE("suite config validation") {
  CHECK_THROWS_WITH_AS(
      suite_config_from_json(nlohmann::json{{"cheks", nlohmann::json::array()}}),
      doctest::Contains("/cheks"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      suite_config_from_json(nlohmann::json{{"checks", {1, 2}}}),
      doctest::Contains("/checks/0"), std::invalid_argument);
  SuiteConfig cfg = suite_config_from_json(
      nlohmann::json{{"checks", {"algebra-axioms"}}, {"seed", 7}});
  CHECK(cfg.checks.size() == 1);
  CHECK(cfg.seed == 7);
}

TEST_CASE("single-check suite passes") {
  SuiteConfig cfg;
  cfg.checks = {"algebra-axioms"};
  VerificationReport report = run_suite(cfg);
  REQUIRE(report.checks.size() == 1);
  CHECK(report.checks[0].passed());
  CHECK(report.all_pass());
}

TEST_CASE("unknown check id recorded as error, suite continues") {
  SuiteConfig cfg;
  cfg.checks = {"no-such-check", "algebra-axioms"};
  VerificationReport report = run_suite(cfg);
  REQUIRE(report.checks.size() == 2);
  CHECK(report.checks[0].verdict == "error");
  CHECK(report.checks[1].passed());
  CHECK_FALSE(report.all_pass());
}

TEST_CASE("suite reports are byte identical across runs") {
  SuiteConfig cfg;
  cfg.checks = {"algebra-axioms", "euclid-cauchy-reproduction"};
  cfg.seed = 0xC1F0;
  const std::string a = run_suite(cfg).dump();
  const std::string b = run_suite(cfg).dump();
  CHECK(a == b);
}

TEST_CASE("convergence study") {
  SUBCASE("single radius gives one row with zero delta") {
    KernelSpec spec;
    spec.family = KernelFamily::cot;
    spec.n = 3;
    spec.q = 1;
    spec.k = 1;
    ConvergenceStudy study =
        convergence_study(spec, {0.3, 0.1, 0.2}, Vec(3, 0.0), {20});
    REQUIRE(study.rows.size() == 1);
    CHECK(study.rows[0].delta == 0.0);
  }
  SUBCASE("cot n=3 k=1 order matches the prediction") {
    KernelSpec spec;
    spec.family = KernelFamily::cot;
    spec.n = 3;
    spec.q = 1;
    spec.k = 1;
    ConvergenceStudy study = convergence_study(spec, {0.3, 0.1, 0.2},
                                               Vec(3, 0.0), {10, 20, 40, 80, 160});
    CHECK(study.predicted_order == doctest::Approx(2.0));
    CHECK(std::abs(study.fitted_order - 2.0) <= 0.3);
  }
  SUBCASE("transversion deltas decrease beyond R = 10") {
    KernelSpec spec;
    spec.family = KernelFamily::transversion;
    spec.n = 3;
    spec.k = 1;
    ConvergenceStudy study =
        convergence_study(spec, {0.5, 0.3, -0.2}, {-0.3, 0.45, 0.25},
                          {10, 20, 40, 80, 160});
    for (std::size_t i = 1; i + 1 < study.rows.size(); ++i)
      CHECK(study.rows[i].delta < study.rows[i - 1].delta);
  }
  SUBCASE("csv output shape") {
    KernelSpec spec;
    spec.family = KernelFamily::cot;
    spec.n = 3;
    spec.q = 1;
    spec.k = 1;
    ConvergenceStudy study =
        convergence_study(spec, {0.3, 0.1, 0.2}, Vec(3, 0.0), {10, 20});
    std::ostringstream os;
    write_csv(study, os);
    const std::string text = os.str();
    CHECK(text.find("R,") == 0);
    CHECK(text.find("delta,est_order") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  }
  SUBCASE("radii must increase") {
    KernelSpec spec;
    spec.family = KernelFamily::cot;
    spec.n = 3;
    spec.q = 1;
    spec.k = 1;
    CHECK_THROWS_AS(
        convergence_study(spec, {0.3, 0.1, 0.2}, Vec(3, 0.0), {20, 10}),
        std::invalid_argument);
  }
}

TEST_CASE("per-check rngs are independent of execution order") {
  SuiteConfig a;
  a.checks = {"algebra-axioms", "fundamental-solutions"};
  a.seed = 42;
  SuiteConfig b;
  b.checks = {"fundamental-solutions"};
  b.seed = 42;
  VerificationReport ra = run_suite(a), rb = run_suite(b);
  // the same check produces identical measurements regardless of position
  const auto& ca = ra.checks[1];
  const auto& cb = rb.checks[0];
  REQUIRE(ca.measurements.size() == cb.measurements.size());
  for (std::size_t i = 0; i < ca.measurements.size(); ++i)
    CHECK(ca.measurements[i].value == cb.measurements[i].value);
}
