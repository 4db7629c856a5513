#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tnut/report.hpp"

namespace tnut {

/// Configuration of one CLI experiment.  Parsed from a flat key=value file
/// plus flag overrides; unknown keys are rejected.
struct ExperimentConfig {
  std::string suite;
  int n = 1;
  std::vector<int> weights;  // empty = all-ones
  double a = 1.0;
  double c = 1.0;
  double alpha = 0.95;
  long long samples = 1000;
  std::vector<double> radii = {10, 20, 40, 80};
  uint64_t seed = 7;
  double tol_scale = 1.0;
  std::string out;  // output path prefix; empty = no files
  std::string lf_case = "su";
  std::string lf_weights = "1,2,3";

  void validate() const;  // throws std::invalid_argument
  std::string print() const;
};

/// Parse "key=value" lines; '#' starts a comment.  Unknown keys throw.
ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base = {});
void apply_key_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Executes the named suite and returns its records; writes <out>.csv and
/// <out>.json when an output prefix is configured.
SuiteResult run_suite(const ExperimentConfig& cfg);

// individual suites (suite field of cfg is ignored)
SuiteResult suite_verify_structure(const ExperimentConfig& cfg);
SuiteResult suite_flow_oracle(const ExperimentConfig& cfg);
SuiteResult suite_curvature_scan(const ExperimentConfig& cfg);
SuiteResult suite_volume_growth(const ExperimentConfig& cfg);
SuiteResult suite_twist_compare(const ExperimentConfig& cfg);
SuiteResult suite_gh_probe(const ExperimentConfig& cfg);
SuiteResult suite_locally_free(const ExperimentConfig& cfg);
SuiteResult suite_gamma_check(const ExperimentConfig& cfg);
SuiteResult suite_gluing_check(const ExperimentConfig& cfg);
SuiteResult suite_expansion_fit(const ExperimentConfig& cfg);

}  // namespace tnut
