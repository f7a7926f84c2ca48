#include "qecqm/errors.hpp"
#include "qecqm/scenario_runner.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

namespace {

constexpr const char* kOutputEnv = "QECQM_OUTPUT_DIR";

std::string output_dir(const std::string& flag, const std::string& fallback) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
  return fallback;
}

void print_issues(const qecqm::ConfigError& e) {
  std::cerr << "invalid config:\n";
  for (const auto& i : e.issues()) std::cerr << "  " << i << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential-scheme metrology with per-round error correction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QECQM_VERSION);

  std::string config_path, out, format = "csv";
  std::uint64_t seed = 0;
  int workers = 0;
  auto* run = app.add_subcommand("run", "Run one scenario and write its reports");
  run->add_option("config", config_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, std::string("Output directory (default $") + kOutputEnv + " or ./reports)");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  auto* seed_opt = run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--workers", workers, "Threads for parameter sweeps")->check(CLI::NonNegativeNumber);

  std::string check_path;
  auto* check = app.add_subcommand("check", "Validate a scenario file");
  check->add_option("config", check_path, "Scenario file")->required()->check(CLI::ExistingFile);

  qecqm::CorpusOptions corpus_opts;
  corpus_opts.scenario_dir = QECQM_DEFAULT_SCENARIO_DIR;
  corpus_opts.golden_dir = std::string(QECQM_DEFAULT_SCENARIO_DIR) + "/golden";
  std::string corpus_out;
  auto* corpus = app.add_subcommand("corpus", "Run all shipped scenarios and compare with golden reports");
  corpus->add_option("--golden", corpus_opts.golden_dir, "Golden report directory");
  corpus->add_option("--scenarios", corpus_opts.scenario_dir, "Scenario directory");
  corpus->add_option("--out", corpus_out, std::string("Report directory (default $") + kOutputEnv + " or ./corpus_out)");
  corpus->add_flag("--update", corpus_opts.update, "Rewrite golden reports instead of comparing");
  corpus->add_option("--workers", corpus_opts.workers, "Concurrent scenarios")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      const auto cfg = qecqm::load_config(check_path);
      std::cout << cfg.name << ": ok\n";
      return 0;
    }
    if (*run) {
      const auto cfg = qecqm::load_config(config_path);
      qecqm::RunOptions opts;
      if (*seed_opt) opts.seed = seed;
      opts.workers = workers;
      const auto report = qecqm::run_scenario(cfg, opts);
      const auto fmt = format == "json" ? qecqm::ReportFormat::json : qecqm::ReportFormat::csv;
      for (const auto& p : qecqm::emit_report(report, output_dir(out, "reports"), fmt)) std::cout << p << "\n";
      for (const auto& [name, msg] : report.errors) std::cerr << "analysis " << name << " failed: " << msg << "\n";
      return report.errors.empty() ? 0 : 1;
    }
    corpus_opts.out_dir = output_dir(corpus_out, "corpus_out");
    const auto entries = qecqm::run_corpus(corpus_opts);
    bool ok = !entries.empty();
    for (const auto& e : entries) {
      std::cout << (e.matched ? "ok    " : "DRIFT ") << e.scenario << "  " << e.message << "\n";
      ok = ok && e.matched;
    }
    if (entries.empty()) std::cerr << "no scenarios found in " << corpus_opts.scenario_dir << "\n";
    return ok ? 0 : 1;
  } catch (const qecqm::ConfigError& e) {
    print_issues(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
