#include "bilab/report.hpp"

#include <fstream>
#include <iomanip>
#include "json.hpp"

#include "bilab/errors.hpp"

namespace bilab {

using nlohmann::ordered_json;

std::string to_json_line(const SuiteReport& r) {
  ordered_json j;
  j["suite"] = r.suite;
  j["ring"] = r.ring;
  j["quotient"] = r.quotient;
  j["status"] = std::string(status_name(r.status));
  j["checked"] = r.checked;
  ordered_json fails = ordered_json::array();
  for (const auto& w : r.failures) fails.push_back({{"witness", w}});
  j["failures"] = fails;
  j["expected_negative"] = r.expected_negative;
  j["elapsed_ms"] = r.elapsed_ms;
  if (r.status == SuiteStatus::Skipped) j["reason"] = r.skip_reason;
  return j.dump();
}

SuiteReport from_json_line(const std::string& line) {
  auto j = ordered_json::parse(line);
  SuiteReport r;
  r.suite = j.at("suite").get<std::string>();
  r.ring = j.at("ring").get<std::string>();
  r.quotient = j.at("quotient").get<std::string>();
  std::string s = j.at("status").get<std::string>();
  r.status = s == "pass" ? SuiteStatus::Pass : s == "fail" ? SuiteStatus::Fail : SuiteStatus::Skipped;
  r.checked = j.at("checked").get<std::uint64_t>();
  for (const auto& f : j.at("failures")) r.failures.push_back(f.at("witness").get<std::string>());
  r.expected_negative = j.at("expected_negative").get<bool>();
  r.elapsed_ms = j.at("elapsed_ms").get<std::uint64_t>();
  if (j.contains("reason")) r.skip_reason = j["reason"].get<std::string>();
  return r;
}

void write_report(const std::vector<SuiteReport>& reports, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open report file '" + path + "'");
  for (const auto& r : reports) out << to_json_line(r) << '\n';
  out.flush();
  if (!out) throw IoError("cannot write report file '" + path + "'");
}

void print_summary(std::ostream& out, const std::vector<SuiteReport>& reports) {
  std::size_t passed = 0, failed = 0, skipped = 0;
  for (const auto& r : reports) {
    if (r.status == SuiteStatus::Pass) ++passed;
    if (r.status == SuiteStatus::Fail) ++failed;
    if (r.status == SuiteStatus::Skipped) ++skipped;
  }
  if (!reports.empty()) {
    out << std::left << std::setw(18) << "suite" << std::setw(10) << "status" << std::setw(12) << "checked"
        << std::setw(10) << "failures" << "ms\n";
    for (const auto& r : reports) {
      std::string status(status_name(r.status));
      if (r.expected_negative) status += "*";
      out << std::left << std::setw(18) << r.suite << std::setw(10) << status << std::setw(12) << r.checked
          << std::setw(10) << r.failures.size() << r.elapsed_ms << '\n';
    }
  }
  out << reports.size() << " suites: " << passed << " passed, " << failed << " failed, " << skipped << " skipped";
  if (!reports.empty()) out << " (ring " << reports.front().ring << ", quotient " << reports.front().quotient << ")";
  out << '\n';
  bool any_negative = false;
  for (const auto& r : reports) any_negative = any_negative || r.expected_negative;
  if (any_negative) out << "* negative control: passes when the checked equality is refuted\n";
  for (const auto& r : reports) {
    if (r.notes.empty() && r.failures.empty() && r.skip_reason.empty()) continue;
    out << "\n[" << r.suite << "]\n";
    if (!r.skip_reason.empty()) out << "  skipped: " << r.skip_reason << '\n';
    for (const auto& n : r.notes) out << "  " << n << '\n';
    for (const auto& f : r.failures) out << "  FAIL " << f << '\n';
  }
}

int exit_code(const std::vector<SuiteReport>& reports) {
  for (const auto& r : reports) {
    if (r.status == SuiteStatus::Fail) return 1;
  }
  return 0;
}

}  // namespace bilab
