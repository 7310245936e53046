#include <gtest/gtest.h>
#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "bilab/errors.hpp"
#include "bilab/report.hpp"
#include "bilab/suites.hpp"

using namespace bilab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("bilab_report_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliResult {
  int code;
  std::string out;
};

CliResult verifier(const std::string& args) {
  fs::path out = scratch_dir() / "stdout.txt";
  std::string cmd = std::string("\"") + VERIFIER_PATH + "\" " + args + " > \"" + out.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

const std::regex kResidueMatrix(R"(\(\[[0-9,]+\],\[[0-9,]+\];\[[0-9,]+\],\[[0-9,]+\]\))");

}  // namespace

TEST(ReportJson, SchemaAndRoundTrip) {
  SuiteReport r;
  r.suite = "theta-sl2";
  r.ring = "5,7";
  r.quotient = "psl2";
  r.status = SuiteStatus::Fail;
  r.checked = 40320;
  r.failures = {"([1,2],[0,0];[0,0],[1,4])"};
  r.elapsed_ms = 12;
  std::string line = to_json_line(r);
  EXPECT_EQ(line,
            R"j({"suite":"theta-sl2","ring":"5,7","quotient":"psl2","status":"fail","checked":40320,)j"
            R"j("failures":[{"witness":"([1,2],[0,0];[0,0],[1,4])"}],"expected_negative":false,"elapsed_ms":12})j");
  SuiteReport back = from_json_line(line);
  EXPECT_EQ(to_json_line(back), line);

  SuiteReport s;
  s.suite = "hdef";
  s.ring = "3^2";
  s.quotient = "sl2";
  s.status = SuiteStatus::Skipped;
  s.skip_reason = "not applicable";
  std::string sl = to_json_line(s);
  EXPECT_NE(sl.find(R"("status":"skipped")"), std::string::npos);
  EXPECT_NE(sl.find(R"("reason":"not applicable")"), std::string::npos);
  EXPECT_EQ(from_json_line(sl).skip_reason, "not applicable");
}

TEST(ReportJson, EmptyReportWritesEmptyFile) {
  fs::path p = scratch_dir() / "empty.jsonl";
  write_report({}, p.string());
  EXPECT_TRUE(fs::exists(p));
  EXPECT_EQ(fs::file_size(p), 0u);
  std::ostringstream out;
  print_summary(out, {});
  EXPECT_NE(out.str().find("0 suites"), std::string::npos);
  EXPECT_EQ(exit_code({}), 0);
  EXPECT_THROW(write_report({}, (scratch_dir() / "missing" / "x.jsonl").string()), IoError);
}

TEST(ReportJson, OnePassingRecord) {
  SuiteConfig cfg;
  cfg.ring = "5";
  cfg.suites = {"s-lemma"};
  auto reports = run(cfg);
  ASSERT_EQ(reports.size(), 1u);
  fs::path p = scratch_dir() / "one.jsonl";
  write_report(reports, p.string());
  std::string text = slurp(p);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_NE(text.find(R"("status":"pass")"), std::string::npos);
  EXPECT_EQ(exit_code(reports), 0);
}

TEST(ReportSuites, ResolveAndCatalog) {
  EXPECT_EQ(suite_catalog().size(), 17u);
  EXPECT_TRUE(is_negative_control("hdef-negative"));
  EXPECT_FALSE(is_negative_control("hdef"));
  auto r57 = parse_ring_descriptor("5,7");
  EXPECT_EQ(resolve_suites(r57, {"all"}).size(), 12u);
  EXPECT_EQ(resolve_suites(r57, {"hdef", "s-lemma", "hdef"}), (std::vector<std::string>{"s-lemma", "hdef"}));
  EXPECT_THROW(resolve_suites(r57, {"bogus"}), ConfigError);
  auto r5 = parse_ring_descriptor("5");
  EXPECT_EQ(resolve_suites(r5, {"all"}).size(), 16u);
  auto r9 = parse_ring_descriptor("3^2");
  auto nine = resolve_suites(r9, {"all"});
  EXPECT_NE(std::find(nine.begin(), nine.end(), "hdef-negative"), nine.end());
  EXPECT_EQ(std::find(nine.begin(), nine.end(), "hdef"), nine.end());
  EXPECT_NE(suite_seed(1, "hdef"), suite_seed(1, "u-def"));
  EXPECT_EQ(suite_seed(7, "hdef"), suite_seed(7, "hdef"));
}

TEST(ReportSuites, DefaultRunAllPass) {
  SuiteConfig cfg;
  cfg.jobs = 2;
  auto reports = run(cfg);
  ASSERT_EQ(reports.size(), 12u);
  for (const auto& r : reports) {
    EXPECT_EQ(r.status, SuiteStatus::Pass) << r.suite;
    EXPECT_TRUE(r.failures.empty()) << r.suite;
  }
  EXPECT_EQ(exit_code(reports), 0);
}

TEST(ReportSuites, ExhaustiveThetaOverF5) {
  SuiteConfig cfg;
  cfg.ring = "5";
  cfg.suites = {"theta-sl2"};
  auto reports = run(cfg);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].status, SuiteStatus::Pass);
  EXPECT_EQ(reports[0].checked, 120u);
}

TEST(ReportSuites, NegativeControlOverZ9) {
  SuiteConfig cfg;
  cfg.ring = "3^2";
  cfg.suites = {"hdef-negative", "hdef"};
  auto reports = run(cfg);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].suite, "hdef");
  EXPECT_EQ(reports[0].status, SuiteStatus::Skipped);
  EXPECT_FALSE(reports[0].skip_reason.empty());
  EXPECT_EQ(reports[1].status, SuiteStatus::Pass);
  EXPECT_TRUE(reports[1].expected_negative);
  EXPECT_TRUE(reports[1].failures.empty());
  EXPECT_EQ(exit_code(reports), 0);
}

TEST(ReportSuites, CorruptedStarIsCaughtWithResidueWitness) {
  SuiteConfig cfg;
  cfg.ring = "5";
  cfg.suites = {"theta-sl2", "mult-formula"};
  cfg.corrupt_star = true;
  auto reports = run(cfg);
  ASSERT_EQ(reports.size(), 2u);
  for (const auto& r : reports) {
    EXPECT_EQ(r.status, SuiteStatus::Fail) << r.suite;
    ASSERT_FALSE(r.failures.empty()) << r.suite;
    EXPECT_LE(r.failures.size(), kMaxFailures);
  }
  const auto& theta = reports[1].suite == "theta-sl2" ? reports[1] : reports[0];
  std::smatch m;
  ASSERT_TRUE(std::regex_search(theta.failures.front(), m, kResidueMatrix)) << theta.failures.front();
  EXPECT_EQ(m.position(0), 0) << theta.failures.front();
  std::string line = to_json_line(theta);
  EXPECT_NE(line.find(R"j("failures":[{"witness":"()j"), std::string::npos);
  EXPECT_EQ(exit_code(reports), 1);
}

TEST(ReportSuites, DeterministicAcrossJobs) {
  SuiteConfig a;
  a.ring = "5,7";
  a.suites = {"theta-sl2", "gamma1-vhu", "rt-sets"};
  a.sample_size = 500;
  a.timing = false;
  a.jobs = 1;
  SuiteConfig b = a;
  b.jobs = 4;
  std::string ta, tb;
  for (const auto& r : run(a)) ta += to_json_line(r) + "\n";
  for (const auto& r : run(b)) tb += to_json_line(r) + "\n";
  EXPECT_EQ(ta, tb);
}

TEST(ReportCli, ExitCodes) {
  auto ok = verifier("--ring 5 --suite s-lemma --suite quotient-interp");
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_NE(ok.out.find("2 suites: 2 passed"), std::string::npos) << ok.out;

  auto fail = verifier("--ring 5,7 --quotient psl2 --suite hdef");
  EXPECT_EQ(fail.code, 1) << fail.out;

  EXPECT_EQ(verifier("--ring 9").code, 2);
  EXPECT_EQ(verifier("--ring 5 --suite nope").code, 2);
  EXPECT_EQ(verifier("--ring 5 --quotient pgl2").code, 2);
  EXPECT_EQ(verifier("--ring 101 --suite hdef").code, 2);
  fs::path bad = scratch_dir() / "no" / "such" / "dir" / "r.jsonl";
  EXPECT_EQ(verifier("--ring 5 --suite s-lemma --report \"" + bad.string() + "\"").code, 2);
}

TEST(ReportCli, ByteIdenticalReportsAcrossJobs) {
  fs::path p1 = scratch_dir() / "j1.jsonl", p4 = scratch_dir() / "j4.jsonl";
  std::string common = "--ring 5 --suite all --no-timing --sample 300 --seed 5 ";
  ASSERT_EQ(verifier(common + "--jobs 1 --report \"" + p1.string() + "\"").code, 0);
  ASSERT_EQ(verifier(common + "--jobs 4 --report \"" + p4.string() + "\"").code, 0);
  std::string a = slurp(p1);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 16);
  EXPECT_EQ(a, slurp(p4));
}

TEST(ReportCli, FormulaMode) {
  fs::path f = scratch_dir() / "u.fo";
  std::ofstream(f) << "exists x:H . g = $u ^ x\n";
  auto r = verifier("--ring 5 --formula \"" + f.string() + "\" --sort H=H");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("2 elements"), std::string::npos) << r.out;

  fs::path c = scratch_dir() / "closed.fo";
  std::ofstream(c) << "exists x:H . $u ^ x = $u ^ $w ^ $w\n";
  r = verifier("--ring 5 --formula \"" + c.string() + "\" --sort H=H");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("true"), std::string::npos) << r.out;

  fs::path bad = scratch_dir() / "bad.fo";
  std::ofstream(bad) << "g = ";
  r = verifier("--ring 5 --formula \"" + bad.string() + "\"");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("end of input"), std::string::npos) << r.out;
}
