#pragma once

#include "qecqm/report.hpp"
#include "qecqm/scenario_config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qecqm {

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  int workers = 0;                    // OpenMP threads for sweeps; 0 = default
};

/// Runs every requested analysis. A failing analysis is recorded in
/// report.errors and the rest still run. Deterministic given (config, seed).
RunReport run_scenario(const ScenarioConfig& cfg, const RunOptions& options = {});

std::string config_hash(const ScenarioConfig& cfg);

struct CorpusEntry {
  std::string scenario;
  std::string report_path;
  bool matched = false;  // equal to the golden file, or golden written under update
  std::string message;
};

struct CorpusOptions {
  std::string scenario_dir;
  std::string out_dir;
  std::string golden_dir;  // empty: no comparison
  bool update = false;     // overwrite golden files instead of comparing
  int workers = 0;
};

/// Runs every *.json scenario in scenario_dir (sorted by file name), writes JSON
/// reports to out_dir and compares them byte for byte with golden_dir.
std::vector<CorpusEntry> run_corpus(const CorpusOptions& options);

}  // namespace qecqm
