#pragma once

#include "fseval/analysis.hpp"
#include "fseval/learners/forest.hpp"
#include "fseval/metrics.hpp"
#include "fseval/runner.hpp"
#include "fseval/selection.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fseval {

// Everything a run config resolves to. Paths inside the config are relative
// to the config file's directory.
struct LoadedConfig {
  RunConfig run;
  std::vector<Dataset> datasets;
  std::vector<SelectorSpec> methods;
  ForestParams forest;
  TimerOptions timer;
};

// Throws Error on unreadable JSON, unknown methods or bad dataset entries.
LoadedConfig load_config(const std::filesystem::path& path, const SelectorRegistry& registry);
LoadedConfig load_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                         const SelectorRegistry& registry);

struct CliContext {
  SelectorRegistry registry;
  CustomMetricSet custom;
};

// Verbs: run, timer, ranks, export, serve, make-data. Returns the exit
// status: 0 ok, 1 fatal, 2 partial failures (run only).
int run_cli(const std::vector<std::string>& args, CliContext& context, std::ostream& out,
            std::ostream& err);

// The exact text `ranks --format json` prints and /api/ranks returns.
std::string rank_report_json_text(const RankReport& report);

}  // namespace fseval
