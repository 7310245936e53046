#pragma once

// Report output: one JSON record per line and a plain-text summary.

#include <ostream>
#include <string>
#include <vector>

#include "bilab/suites.hpp"

namespace bilab {

// {"suite","ring","quotient","status","checked","failures":[{"witness"}],
//  "expected_negative","elapsed_ms"}; skipped records also carry "reason".
std::string to_json_line(const SuiteReport& r);
SuiteReport from_json_line(const std::string& line);

// Newline-delimited records. IoError when the file cannot be written.
void write_report(const std::vector<SuiteReport>& reports, const std::string& path);

// Fixed-width table, then per-suite notes and failure witnesses.
void print_summary(std::ostream& out, const std::vector<SuiteReport>& reports);

// 0 when nothing failed, 1 otherwise. Skipped suites do not fail a run.
int exit_code(const std::vector<SuiteReport>& reports);

}  // namespace bilab
