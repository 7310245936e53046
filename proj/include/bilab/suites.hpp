#pragma once

// The verification suites behind the verifier CLI. Every suite compares a
// computed object against an independent brute-force oracle and reports
// counts and witnesses.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bilab/ring.hpp"
#include "bilab/sl2.hpp"

namespace bilab {

enum class SuiteStatus { Pass, Fail, Skipped };

std::string_view status_name(SuiteStatus s);

struct SuiteReport {
  std::string suite;
  std::string ring;
  std::string quotient;
  SuiteStatus status = SuiteStatus::Pass;
  std::string skip_reason;
  std::uint64_t checked = 0;
  std::vector<std::string> failures;  // witness strings, at most 10
  bool expected_negative = false;
  std::uint64_t elapsed_ms = 0;
  // Human-readable detail printed under the summary table only.
  std::vector<std::string> notes;
};

struct SuiteConfig {
  std::string ring = "5,7";
  QuotientKind quotient = QuotientKind::Trivial;
  std::vector<std::string> suites = {"all"};
  std::size_t sample_size = 10000;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::optional<std::string> report_path;
  bool timing = true;
  // Self-test hook: every star product is multiplied by u afterwards.
  bool corrupt_star = false;
};

inline constexpr std::size_t kMaxFailures = 10;
inline constexpr std::uint64_t kExhaustiveGroupLimit = 100'000;
inline constexpr std::uint64_t kExhaustiveRingLimit = 10'000;

const std::vector<std::string>& suite_catalog();
bool is_negative_control(std::string_view suite);

// All components are prime fields of characteristic at least 5.
bool fields_at_least_5(const ProductRing& ring);

// Expands "all" into the suites applicable to the ring, keeps explicit
// names in catalog order and drops duplicates. ConfigError on unknown names.
std::vector<std::string> resolve_suites(const ProductRing& ring, const std::vector<std::string>& requested);

// Per-suite seed: a fixed mix of the run seed and the suite name.
std::uint64_t suite_seed(std::uint64_t seed, std::string_view suite);

// Runs the suites of `config` and returns one report per suite in resolved
// order. Reports depend only on (ring, quotient, suites, sample, seed) when
// timing is off. ConfigError for bad configuration, TooLargeError when a
// requested suite exceeds its size guard.
std::vector<SuiteReport> run(const SuiteConfig& config);

}  // namespace bilab
