#pragma once

#include "fseval/rankstats.hpp"
#include "fseval/results.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fseval {

// A results bundle held in memory: results.csv rows, the manifest when one
// exists, and timings.csv rows when present. Read-only queries below are the
// single computation path behind both the CLI and the HTTP API.
struct ResultsStore {
  std::vector<EvaluationRecord> records;  // canonical order
  nlohmann::json manifest = nlohmann::json::object();
  std::vector<TimingRecord> timings;
  std::filesystem::path results_csv;  // empty for purely in-memory stores
  std::filesystem::path timings_csv;

  Orientation orientation_of(const std::string& metric) const;
  std::vector<std::string> datasets() const;
  std::vector<std::string> methods() const;
  std::vector<std::string> experiments() const;
  // Base metric names (FSDEM_/STAB_ prefixes stripped).
  std::vector<std::string> metrics() const;
};

// path is a bundle directory or a results.csv file.
ResultsStore load_results(const std::filesystem::path& path);

ResultsStore store_from_records(std::vector<EvaluationRecord> records,
                                nlohmann::json manifest = nlohmann::json::object());

struct ImportOutcome {
  std::size_t accepted = 0;
  std::vector<RejectedRow> rejected;
};

// Merges a results.csv body into the store (rows keyed by dataset, method,
// experiment, metric, ratio replace existing ones). Curves arriving without
// FSDEM rows get them computed. A bad header throws and leaves the store
// untouched.
ImportOutcome import_results(ResultsStore& store, const std::string& csv_text);

struct RankQuery {
  std::string metric;
  std::string experiment;
  RankFamily stat = RankFamily::standard;
  double alpha = 0.05;
  std::vector<std::string> exclude;  // method or dataset names
};

struct RankReport {
  RankQuery query;
  ScoreTable table;
  MatrixXd ranks;
  RankSummary summary;
};

// Builds the (dataset x method) table from FSDEM_<metric> rows.
RankReport compute_ranks(const ResultsStore& store, const RankQuery& query);

nlohmann::json to_json(const RankReport& report);
std::string format_text(const RankReport& report);
std::string format_latex(const RankReport& report);
std::string cd_diagram_svg(const RankReport& report);

// FSDEM_<metric> values, one row per dataset and one column per method.
std::string fsdem_latex(const ResultsStore& store, const std::string& metric,
                        const std::string& experiment, const std::vector<std::string>& exclude);

nlohmann::json manifest_json(const ResultsStore& store);
nlohmann::json curves_json(const ResultsStore& store, const std::string& metric,
                           const std::string& experiment, const std::optional<std::string>& dataset,
                           const std::vector<std::string>& exclude);
nlohmann::json fsdem_json(const ResultsStore& store, const std::string& experiment,
                          const std::vector<std::string>& exclude);
nlohmann::json timings_json(const ResultsStore& store, std::optional<TimerAxis> axis);

// Splits "a,b" lists and flattens repeated options.
std::vector<std::string> split_names(const std::vector<std::string>& values);

std::string latex_escape(const std::string& s);

}  // namespace fseval
