#pragma once

#include <string>
#include <vector>

namespace tnut {

inline constexpr int kReportSchemaVersion = 1;

struct ReportRecord {
  std::string suite;
  std::string case_id;   // module.operation/check
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  uint64_t seed = 0;
  double wall_ms = 0.0;
};

struct SuiteResult {
  std::string suite;
  std::vector<ReportRecord> records;

  int passed() const;
  int failed() const;
  void add(const std::string& case_id, const std::string& quantity, double value, double tolerance,
           bool pass, uint64_t seed, double wall_ms = 0.0);
};

/// CSV with fixed versioned columns; the leading timestamp comment line is
/// the only non-deterministic content.
void write_csv(const std::string& path, const SuiteResult& result, bool with_timestamp = true);

/// JSON summary {schema_version, suite, passed, failed, records: [...]}.
void write_json(const std::string& path, const SuiteResult& result);

std::string csv_body(const SuiteResult& result);

}  // namespace tnut
