#include "tnut/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tnut {

int SuiteResult::passed() const {
  int c = 0;
  for (const auto& r : records) c += r.pass ? 1 : 0;
  return c;
}

int SuiteResult::failed() const { return static_cast<int>(records.size()) - passed(); }

void SuiteResult::add(const std::string& case_id, const std::string& quantity, double value,
                      double tolerance, bool pass, uint64_t seed, double wall_ms) {
  records.push_back({suite, case_id, quantity, value, tolerance, pass, seed, wall_ms});
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_body(const SuiteResult& result) {
  std::ostringstream os;
  os << "schema_version,suite,case_id,quantity,value,tolerance,pass,seed\n";
  for (const auto& r : result.records) {
    os << kReportSchemaVersion << ',' << r.suite << ',' << r.case_id << ',' << r.quantity << ','
       << fmt_double(r.value) << ',' << fmt_double(r.tolerance) << ',' << (r.pass ? 1 : 0) << ','
       << r.seed << '\n';
  }
  return os.str();
}

void write_csv(const std::string& path, const SuiteResult& result, bool with_timestamp) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  if (with_timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
    f << "# generated " << buf << "\n";
  }
  f << csv_body(result);
}

void write_json(const std::string& path, const SuiteResult& result) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["suite"] = result.suite;
  j["passed"] = result.passed();
  j["failed"] = result.failed();
  j["records"] = nlohmann::json::array();
  for (const auto& r : result.records) {
    j["records"].push_back({{"case_id", r.case_id},
                            {"quantity", r.quantity},
                            {"value", r.value},
                            {"tolerance", r.tolerance},
                            {"pass", r.pass},
                            {"seed", r.seed},
                            {"wall_ms", r.wall_ms}});
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << j.dump(2) << "\n";
}

}  // namespace tnut
