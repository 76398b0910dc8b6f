#include "fseval/results.hpp"

#include "fseval/csv.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace fseval {

const char* to_string(TimerAxis axis) {
  return axis == TimerAxis::features ? "features" : "instances";
}

TimerAxis parse_timer_axis(const std::string& s) {
  if (s == "features") return TimerAxis::features;
  if (s == "instances") return TimerAxis::instances;
  throw Error("unknown timer axis: " + s);
}

double quantize(double v) { return *csv::parse_double(csv::format_general(v, 6)); }

double quantize_ratio(double r) { return *csv::parse_double(csv::format_fixed(r, 4)); }

void sort_canonical(std::vector<EvaluationRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dataset, a.method, a.experiment, a.metric, a.ratio) <
           std::tie(b.dataset, b.method, b.experiment, b.metric, b.ratio);
  });
}

namespace {

void append_cell(std::string& out, const EvaluationRecord& r) {
  out += csv::escape(r.dataset);
  out += ',';
  out += csv::escape(r.method);
  out += ',';
  out += csv::escape(r.experiment);
  out += ',';
  out += csv::escape(r.metric);
  out += ',';
  out += csv::format_fixed(r.ratio, 4);
  out += ',';
  out += std::to_string(r.n_features);
  out += ',';
  out += csv::format_general(r.mean, 6);
  out += ',';
  out += csv::format_general(r.std, 6);
  out += ',';
  out += std::to_string(r.n_runs);
}

}  // namespace

std::string format_results_csv(const std::vector<EvaluationRecord>& records) {
  std::string out = kResultsHeader;
  out += '\n';
  for (const auto& r : records) {
    append_cell(out, r);
    out += '\n';
  }
  return out;
}

std::string format_runs_csv(const std::vector<RunRecord>& runs) {
  std::string out = kRunsHeader;
  out += '\n';
  for (const auto& r : runs) {
    append_cell(out, r.cell);
    out += ',' + std::to_string(r.rep) + ',' + std::to_string(r.seed) + ',' +
           csv::format_general(r.value, 6) + '\n';
  }
  return out;
}

std::string format_timings_csv(const std::vector<TimingRecord>& timings) {
  std::string out = kTimingsHeader;
  out += '\n';
  for (const auto& t : timings) {
    out += csv::escape(t.method) + ',' + to_string(t.axis) + ',' + std::to_string(t.n_instances) +
           ',' + std::to_string(t.n_features) + ',' + csv::format_general(t.seconds, 6) + ',' +
           (t.timed_out ? "true" : "false") + '\n';
  }
  return out;
}

ParsedResults parse_results_csv(const std::string& text) {
  const auto rows = csv::lines(text);
  if (rows.empty() || rows[0] != kResultsHeader)
    throw Error(std::string("results header must be exactly: ") + kResultsHeader);
  ParsedResults out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const std::size_t line = i + 1;
    if (rows[i].empty()) continue;
    const auto f = csv::split_line(rows[i]);
    if (f.size() != 9) {
      out.rejected.push_back({line, "expected 9 fields, got " + std::to_string(f.size())});
      continue;
    }
    EvaluationRecord r;
    r.dataset = f[0];
    r.method = f[1];
    r.experiment = f[2];
    r.metric = f[3];
    const auto ratio = csv::parse_double(f[4]);
    const auto nf = csv::parse_int(f[5]);
    const auto mean = csv::parse_double(f[6]);
    const auto sd = csv::parse_double(f[7]);
    const auto nr = csv::parse_int(f[8]);
    if (r.dataset.empty() || r.method.empty() || r.experiment.empty() || r.metric.empty()) {
      out.rejected.push_back({line, "empty name field"});
      continue;
    }
    if (!ratio || !nf || !mean || !sd || !nr || !std::isfinite(*ratio) || !std::isfinite(*mean) ||
        !std::isfinite(*sd) || *sd < 0 || *nf < 0 || *nr < 0) {
      out.rejected.push_back({line, "malformed numeric field"});
      continue;
    }
    r.ratio = *ratio;
    r.n_features = static_cast<Index>(*nf);
    r.mean = *mean;
    r.std = *sd;
    r.n_runs = static_cast<Index>(*nr);
    out.records.push_back(std::move(r));
  }
  return out;
}

std::vector<TimingRecord> parse_timings_csv(const std::string& text) {
  const auto rows = csv::lines(text);
  if (rows.empty() || rows[0] != kTimingsHeader)
    throw Error(std::string("timings header must be exactly: ") + kTimingsHeader);
  std::vector<TimingRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = csv::split_line(rows[i]);
    const auto ni = f.size() == 6 ? csv::parse_int(f[2]) : std::nullopt;
    const auto nf = f.size() == 6 ? csv::parse_int(f[3]) : std::nullopt;
    const auto sec = f.size() == 6 ? csv::parse_double(f[4]) : std::nullopt;
    if (!ni || !nf || !sec || (f[5] != "true" && f[5] != "false"))
      throw Error("timings: malformed line " + std::to_string(i + 1));
    out.push_back({f[0], parse_timer_axis(f[1]), static_cast<Index>(*ni), static_cast<Index>(*nf),
                   *sec, f[5] == "true"});
  }
  return out;
}

}  // namespace fseval
