#pragma once

#include "fseval/dataset.hpp"
#include "fseval/learners/forest.hpp"
#include "fseval/metrics.hpp"
#include "fseval/results.hpp"
#include "fseval/selection.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fseval {

inline const std::vector<std::string>& known_eval_types() {
  static const std::vector<std::string> names{"supervised", "unsupervised", "model_agnostic",
                                              "custom"};
  return names;
}

// Which evaluation family computes a built-in metric.
std::string eval_type_of(const std::string& metric);

// `true` selects every configured metric, `false` none, otherwise the list.
struct StabilitySetting {
  bool all = true;
  std::vector<std::string> metrics;

  static StabilitySetting none() { return {false, {}}; }
};

struct RunConfig {
  std::filesystem::path output_dir = "results";
  int cv = 5;
  int avg_steps = 10;
  int supervised_iter = 5;
  int unsupervised_iter = 10;
  std::vector<std::string> eval_type{"supervised", "unsupervised", "model_agnostic"};
  std::vector<std::string> metrics{"CLSACC", "NMI", "ACC", "AUC", "AAD"};
  StabilitySetting stability;
  std::vector<std::string> experiments{"10Percent", "100Percent"};
  bool save_all = false;
  std::uint64_t base_seed = 0;
  int workers = 1;  // 0 = hardware concurrency
  int kmeans_max_iter = 300;

  bool has_eval_type(const std::string& t) const;
  void validate(const CustomMetricSet& custom = {}) const;
  // Metrics evaluated per grid point, built-ins first then custom names.
  std::vector<std::string> active_metrics(const CustomMetricSet& custom) const;
  bool wants_stability(const std::string& metric) const;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

// Stable 64-bit hash of (base, labels, index); identical on every platform.
std::uint64_t derive_seed(std::uint64_t base, const std::vector<std::string>& labels,
                          std::uint64_t index);

// Stratified assignment of instances to folds. Each class is shuffled and
// dealt round-robin, continuing across classes, so per-class fold counts
// differ by at most one. Throws when a class has fewer members than folds.
std::vector<int> stratified_folds(const Labels& y, int n_classes, int n_folds, std::uint64_t seed);

struct RunResults {
  std::vector<EvaluationRecord> records;  // canonical order
  std::vector<RunRecord> runs;            // filled when save_all
  std::vector<FailureRecord> failures;
  nlohmann::json manifest;

  bool partial() const { return !failures.empty(); }
};

RunResults run(const RunConfig& config, const std::vector<Dataset>& datasets,
               const std::vector<SelectorSpec>& methods, const Classifier& classifier,
               const CustomMetricSet& custom = {});

// results.csv, manifest.json and (when present) runs.csv / failures.json,
// each written atomically.
void write_results(const RunResults& results, const std::filesystem::path& dir);

struct TimerOptions {
  std::vector<Index> feature_sizes{100, 200, 500, 1000, 2000, 5000, 10000};
  std::vector<Index> instance_sizes{500, 1000, 2000, 5000, 10000, 20000};
  Index fixed_instances = 500;
  Index fixed_features = 100;
  int repeats = 3;
};

// vary is "features", "instances" or "both". Measurements run serially.
std::vector<TimingRecord> timer(const RunConfig& config, const std::vector<SelectorSpec>& methods,
                                const std::string& vary, double time_limit,
                                const TimerOptions& options = {});

void write_timings(const std::vector<TimingRecord>& timings, const std::filesystem::path& dir);

}  // namespace fseval
