#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "tnut/report.hpp"
#include "tnut/suites.hpp"

using namespace tnut;

TEST_CASE("csv body is deterministic and versioned") {
  SuiteResult r;
  r.suite = "verify-structure";
  r.add("cone_structure.moment_map/closed_form", "max_residual", 1.25e-14, 1e-12, true, 7, 3.5);
  const std::string body = csv_body(r);
  CHECK(body.find("schema_version") == 0);
  CHECK(body.find("1,verify-structure,cone_structure.moment_map/closed_form") != std::string::npos);
  CHECK(csv_body(r) == body);
}

TEST_CASE("config parsing: overrides, rejects unknown keys, validates") {
  ExperimentConfig cfg;
  apply_key_value(cfg, "n", "2");
  apply_key_value(cfg, "weights", "1,2");
  apply_key_value(cfg, "a", "0.5");
  apply_key_value(cfg, "radii", "1,2,4");
  CHECK(cfg.n == 2);
  CHECK(cfg.weights.size() == 2);
  CHECK(cfg.radii.size() == 3);
  CHECK_THROWS_AS(apply_key_value(cfg, "nonsense", "1"), std::invalid_argument);

  ExperimentConfig bad = cfg;
  bad.weights = {1, 2, 3};  // length mismatch with n = 2
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.radii = {4, 2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  const char* path = "/tmp/tnut_test_config.txt";
  {
    std::ofstream f(path);
    f << "# comment\nsuite=verify-structure\nn=1\nweights=1\nsamples=50\nseed=9\n";
  }
  const ExperimentConfig filed = parse_config_file(path);
  CHECK(filed.suite == "verify-structure");
  CHECK(filed.samples == 50);
  CHECK(filed.seed == 9);
  std::remove(path);
}

TEST_CASE("suites run standalone and reports round-trip byte-identically") {
  ExperimentConfig cfg;
  cfg.suite = "verify-structure";
  cfg.n = 1;
  cfg.samples = 100;
  cfg.seed = 7;
  const SuiteResult r1 = run_suite(cfg);
  CHECK(r1.failed() == 0);
  const SuiteResult r2 = run_suite(cfg);
  CHECK(csv_body(r1) == csv_body(r2));  // wall time lives in the JSON only

  cfg.out = "/tmp/tnut_test_out";
  run_suite(cfg);
  std::ifstream csv("/tmp/tnut_test_out.csv");
  REQUIRE(csv.good());
  std::string first;
  std::getline(csv, first);
  CHECK(first.rfind("# generated", 0) == 0);
  std::ifstream js("/tmp/tnut_test_out.json");
  REQUIRE(js.good());
  std::remove("/tmp/tnut_test_out.csv");
  std::remove("/tmp/tnut_test_out.json");
}

TEST_CASE("smaller suites pass end to end") {
  ExperimentConfig cfg;
  cfg.seed = 7;

  cfg.suite = "flow-oracle";
  cfg.n = 2;
  cfg.samples = 10;
  CHECK(run_suite(cfg).failed() == 0);

  cfg.suite = "expansion-fit";
  CHECK(run_suite(cfg).failed() == 0);

  cfg.suite = "gamma-check";
  cfg.n = 2;
  cfg.samples = 100;
  CHECK(run_suite(cfg).failed() == 0);

  cfg.suite = "locally-free";
  cfg.lf_case = "su";
  cfg.lf_weights = "1,2,3";
  cfg.samples = 2000;
  CHECK(run_suite(cfg).failed() == 0);
}
