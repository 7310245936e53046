// verifier: runs the verification suites over one ring and quotient, or
// evaluates a user formula over the group.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bilab/errors.hpp"
#include "bilab/formula.hpp"
#include "bilab/interp_sl2.hpp"
#include "bilab/report.hpp"
#include "bilab/suites.hpp"

namespace {

using namespace bilab;

int evaluate_formula(const SuiteConfig& cfg, const std::string& file, const std::vector<std::string>& sort_bindings) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read formula file '" + file + "'");
  std::stringstream text;
  text << in.rdbuf();
  fo::Formula f = fo::parse(text.str());

  GroupCtx ctx(parse_ring_descriptor(cfg.ring), cfg.quotient);
  Sl2Interp interp(ctx);
  DefinableSets sets(interp, cfg.jobs);
  fo::SortEnv sorts;
  for (const auto& binding : sort_bindings) {
    auto eq = binding.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == binding.size()) {
      throw ConfigError("--sort expects NAME=CARRIER, got '" + binding + "'");
    }
    sorts[binding.substr(0, eq)] = sets.named(binding.substr(eq + 1));
  }
  fo::ParamEnv params = interp.params();

  auto free = fo::free_variables(f);
  if (free.empty()) {
    bool truth = fo::eval(ctx, f, sorts, params);
    std::cout << (truth ? "true" : "false") << '\n';
    if (truth && f.kind == fo::Formula::Kind::Exists) {
      if (auto w = fo::find_witness(ctx, f, sorts, params)) {
        for (const auto& [name, g] : *w) std::cout << "  " << name << " = " << to_string(g) << '\n';
      }
    }
    return 0;
  }
  if (free.size() == 1) {
    const std::string var = *free.begin();
    const auto& group = sets.named("G");
    auto set = fo::define_set(ctx, f, var, &group, sorts, params, fo::Strategy::Auto, cfg.jobs);
    std::cout << set.size() << " elements satisfy the formula in " << var << '\n';
    for (std::size_t i = 0; i < set.size() && i < 20; ++i) std::cout << "  " << to_string(set[i]) << '\n';
    if (set.size() > 20) std::cout << "  ...\n";
    return 0;
  }
  throw ConfigError("formula has " + std::to_string(free.size()) + " free variables; at most one is supported");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks definability and interpretation claims for SL2 and SL3 over finite rings"};
  SuiteConfig cfg;
  std::string quotient = "sl2";
  std::vector<std::string> suites;
  std::string report;
  std::string formula;
  std::vector<std::string> sort_bindings;
  app.add_option("--ring", cfg.ring, "Ring descriptor, e.g. 5,7 or 3^2")->default_val("5,7");
  app.add_option("--quotient", quotient, "sl2, mod-pm1 or psl2")
      ->default_val("sl2")
      ->check(CLI::IsMember({"sl2", "mod-pm1", "psl2"}));
  app.add_option("--suite", suites, "Suite name or 'all' (repeatable)");
  app.add_option("--sample", cfg.sample_size, "Sample size for sampled suites")->default_val(10000)->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for sampled suites")->default_val(1);
  app.add_option("--jobs", cfg.jobs, "Worker threads")->default_val(1)->check(CLI::PositiveNumber);
  app.add_option("--report", report, "Write JSON lines here");
  app.add_flag("--no-timing", "Record elapsed_ms as 0 for byte-identical reports");
  app.add_option("--formula", formula, "Evaluate the formula in FILE instead of running suites");
  app.add_option("--sort", sort_bindings, "NAME=CARRIER with CARRIER one of G, S, H, U, V, W, U01, Gamma1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    cfg.quotient = parse_quotient(quotient);
    cfg.timing = app.count("--no-timing") == 0;
    if (!formula.empty()) return evaluate_formula(cfg, formula, sort_bindings);
    if (!sort_bindings.empty()) throw ConfigError("--sort needs --formula");
    cfg.suites = suites.empty() ? std::vector<std::string>{"all"} : suites;
    if (!report.empty()) cfg.report_path = report;
    auto reports = run(cfg);
    if (cfg.report_path) write_report(reports, *cfg.report_path);
    print_summary(std::cout, reports);
    return exit_code(reports);
  } catch (const bilab::Error& e) {
    std::cerr << "verifier: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "verifier: " << e.what() << '\n';
    return 2;
  }
}
