#pragma once

#include "fseval/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fseval {

inline constexpr const char* kVersion = "1.0.0";

// One (dataset, method, experiment, metric, grid point) cell. FSDEM_<metric>
// and STAB_<metric> rows carry ratio 0 and n_features 0.
struct EvaluationRecord {
  std::string dataset;
  std::string method;
  std::string experiment;
  std::string metric;
  double ratio = 0.0;
  Index n_features = 0;
  double mean = 0.0;
  double std = 0.0;
  Index n_runs = 0;

  bool operator==(const EvaluationRecord&) const = default;
};

// runs.csv row: the aggregate cell plus one repetition's mean.
struct RunRecord {
  EvaluationRecord cell;
  Index rep = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
};

enum class TimerAxis { features, instances };
const char* to_string(TimerAxis axis);
TimerAxis parse_timer_axis(const std::string& s);

struct TimingRecord {
  std::string method;
  TimerAxis axis = TimerAxis::features;
  Index n_instances = 0;
  Index n_features = 0;
  double seconds = 0.0;
  bool timed_out = false;
};

struct FailureRecord {
  std::string dataset;
  std::string method;
  std::string experiment;  // empty when the whole method run failed
  std::string metric;
  Index rep = 0;
  std::string message;
};

inline const char* kResultsHeader = "dataset,method,experiment,metric,ratio,n_features,mean,std,n_runs";
inline const char* kRunsHeader =
    "dataset,method,experiment,metric,ratio,n_features,mean,std,n_runs,rep,seed,value";
inline const char* kTimingsHeader = "method,axis,n_instances,n_features,seconds,timed_out";

// Rounds to the persisted precision (6 significant digits) so in-memory and
// re-parsed values agree bit for bit.
double quantize(double v);
// Ratios are persisted with 4 decimals.
double quantize_ratio(double r);

// Orders rows by (dataset, method, experiment, metric, ratio).
void sort_canonical(std::vector<EvaluationRecord>& records);

std::string format_results_csv(const std::vector<EvaluationRecord>& records);
std::string format_runs_csv(const std::vector<RunRecord>& runs);
std::string format_timings_csv(const std::vector<TimingRecord>& timings);

struct RejectedRow {
  std::size_t line = 0;  // 1-based line in the input
  std::string reason;
};

struct ParsedResults {
  std::vector<EvaluationRecord> records;
  std::vector<RejectedRow> rejected;
};

// Throws Error when the header does not match; bad data rows are rejected
// individually.
ParsedResults parse_results_csv(const std::string& text);
std::vector<TimingRecord> parse_timings_csv(const std::string& text);

}  // namespace fseval
