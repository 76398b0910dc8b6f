#include "fseval/analysis.hpp"

#include "fseval/csv.hpp"
#include "fseval/fsdem.hpp"
#include "fseval/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace fseval {

using nlohmann::json;

namespace {

constexpr std::string_view kFsdemPrefix = "FSDEM_";
constexpr std::string_view kStabPrefix = "STAB_";

bool starts_with(const std::string& s, std::string_view p) { return s.rfind(p, 0) == 0; }

std::string base_metric(const std::string& m) {
  if (starts_with(m, kFsdemPrefix)) return m.substr(kFsdemPrefix.size());
  if (starts_with(m, kStabPrefix)) return m.substr(kStabPrefix.size());
  return m;
}

bool is_summary_metric(const std::string& m) {
  return starts_with(m, kFsdemPrefix) || starts_with(m, kStabPrefix);
}

bool excluded(const std::vector<std::string>& exclude, const std::string& name) {
  return std::find(exclude.begin(), exclude.end(), name) != exclude.end();
}

std::vector<std::string> manifest_names(const json& manifest, const char* key) {
  std::vector<std::string> out;
  if (!manifest.contains(key) || !manifest.at(key).is_array()) return out;
  for (const auto& item : manifest.at(key)) {
    if (item.is_string())
      out.push_back(item.get<std::string>());
    else if (item.is_object() && item.contains("name"))
      out.push_back(item.at("name").get<std::string>());
  }
  return out;
}

template <typename Fn>
std::vector<std::string> unique_sorted(const std::vector<EvaluationRecord>& records, Fn&& field,
                                       std::vector<std::string> extra = {}) {
  std::set<std::string> s(extra.begin(), extra.end());
  for (const auto& r : records) s.insert(field(r));
  return {s.begin(), s.end()};
}

std::string fixed(double v, int decimals) { return csv::format_fixed(v, decimals); }

// Adds FSDEM_/STAB_ rows for curves that lack them.
void complete_summaries(ResultsStore& store) {
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::map<Key, MetricCurve> curves;
  std::set<Key> have;
  for (const auto& r : store.records) {
    if (starts_with(r.metric, kFsdemPrefix)) {
      have.insert({r.dataset, r.method, r.experiment, base_metric(r.metric)});
    } else if (!is_summary_metric(r.metric)) {
      auto& c = curves[{r.dataset, r.method, r.experiment, r.metric}];
      c.experiment = r.experiment;
      c.metric = r.metric;
      c.points.push_back({r.ratio, r.mean, r.std});
    }
  }
  for (auto& [key, curve] : curves) {
    if (have.count(key)) continue;
    std::sort(curve.points.begin(), curve.points.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.ratio < b.ratio; });
    const auto& [d, m, e, metric] = key;
    const auto score = fsdem(curve);
    const auto n = static_cast<Index>(curve.points.size());
    store.records.push_back({d, m, e, "FSDEM_" + metric, 0.0, 0, quantize(score.score), 0.0, n});
    if (score.stability)
      store.records.push_back({d, m, e, "STAB_" + metric, 0.0, 0, quantize(*score.stability), 0.0, n});
  }
  sort_canonical(store.records);
}

}  // namespace

Orientation ResultsStore::orientation_of(const std::string& metric) const {
  const auto base = base_metric(metric);
  if (manifest.contains("metrics") && manifest.at("metrics").is_array())
    for (const auto& m : manifest.at("metrics"))
      if (m.is_object() && m.value("name", "") == base)
        return m.value("orientation", "higher") == "lower" ? Orientation::lower_is_better
                                                           : Orientation::higher_is_better;
  return builtin_orientation(base);
}

std::vector<std::string> ResultsStore::datasets() const {
  return unique_sorted(records, [](const auto& r) { return r.dataset; },
                       manifest_names(manifest, "datasets"));
}

std::vector<std::string> ResultsStore::methods() const {
  return unique_sorted(records, [](const auto& r) { return r.method; },
                       manifest_names(manifest, "methods"));
}

std::vector<std::string> ResultsStore::experiments() const {
  return unique_sorted(records, [](const auto& r) { return r.experiment; },
                       manifest_names(manifest, "experiments"));
}

std::vector<std::string> ResultsStore::metrics() const {
  return unique_sorted(records, [](const auto& r) { return base_metric(r.metric); },
                       manifest_names(manifest, "metrics"));
}

ResultsStore load_results(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  ResultsStore store;
  fs::path dir;
  if (fs::is_directory(path)) {
    dir = path;
    store.results_csv = path / "results.csv";
  } else {
    dir = path.parent_path();
    store.results_csv = path;
  }
  if (!fs::exists(store.results_csv)) throw Error("results file not found: " + store.results_csv.string());
  auto parsed = parse_results_csv(csv::read_file(store.results_csv));
  if (!parsed.rejected.empty())
    throw Error("results file has malformed line " + std::to_string(parsed.rejected.front().line) +
                ": " + parsed.rejected.front().reason);
  store.records = std::move(parsed.records);
  sort_canonical(store.records);
  const auto manifest_path = (dir.empty() ? fs::path(".") : dir) / "manifest.json";
  if (fs::exists(manifest_path)) {
    try {
      store.manifest = json::parse(csv::read_file(manifest_path));
    } catch (const json::exception& e) {
      throw Error(std::string("malformed manifest.json: ") + e.what());
    }
  }
  const auto timings_path = (dir.empty() ? fs::path(".") : dir) / "timings.csv";
  if (fs::exists(timings_path)) {
    store.timings_csv = timings_path;
    store.timings = parse_timings_csv(csv::read_file(timings_path));
  }
  return store;
}

ResultsStore store_from_records(std::vector<EvaluationRecord> records, json manifest) {
  ResultsStore store;
  store.records = std::move(records);
  store.manifest = std::move(manifest);
  sort_canonical(store.records);
  return store;
}

ImportOutcome import_results(ResultsStore& store, const std::string& csv_text) {
  auto parsed = parse_results_csv(csv_text);  // throws on a bad header
  ImportOutcome outcome;
  outcome.rejected = std::move(parsed.rejected);
  outcome.accepted = parsed.records.size();

  using Key = std::tuple<std::string, std::string, std::string, std::string, double>;
  std::map<Key, std::size_t> index;
  for (std::size_t i = 0; i < store.records.size(); ++i) {
    const auto& r = store.records[i];
    index[{r.dataset, r.method, r.experiment, r.metric, r.ratio}] = i;
  }
  for (auto& r : parsed.records) {
    const Key key{r.dataset, r.method, r.experiment, r.metric, r.ratio};
    auto it = index.find(key);
    if (it != index.end()) {
      store.records[it->second] = std::move(r);
    } else {
      index[key] = store.records.size();
      store.records.push_back(std::move(r));
    }
  }
  complete_summaries(store);
  return outcome;
}

RankReport compute_ranks(const ResultsStore& store, const RankQuery& query) {
  const std::string key = "FSDEM_" + query.metric;
  std::set<std::string> methods, datasets;
  std::map<std::pair<std::string, std::string>, double> cells;
  bool found = false;
  for (const auto& r : store.records) {
    if (r.metric != key || r.experiment != query.experiment) continue;
    found = true;
    if (excluded(query.exclude, r.method) || excluded(query.exclude, r.dataset)) continue;
    methods.insert(r.method);
    datasets.insert(r.dataset);
    cells[{r.dataset, r.method}] = r.mean;
  }
  if (!found)
    throw Error("no " + key + " results for experiment " + query.experiment);
  if (methods.size() < 2) throw Error("fewer than 2 methods after exclusion");

  RankReport rep;
  rep.query = query;
  rep.table = make_score_table({methods.begin(), methods.end()}, {datasets.begin(), datasets.end()},
                               cells, store.orientation_of(query.metric));
  if (rep.table.datasets.size() < 2) throw Error("fewer than 2 complete datasets after exclusion");
  rep.ranks = ranks(rep.table, query.stat);
  rep.summary = friedman_nemenyi(rep.ranks, rep.table.methods, query.alpha, query.stat);
  return rep;
}

json to_json(const RankReport& rep) {
  const auto& s = rep.summary;
  json j;
  j["metric"] = rep.query.metric;
  j["experiment"] = rep.query.experiment;
  j["stat"] = to_string(rep.query.stat);
  j["alpha"] = rep.query.alpha;
  j["orientation"] = to_string(rep.table.orientation);
  j["methods"] = rep.table.methods;
  j["datasets"] = rep.table.datasets;
  j["dropped_datasets"] = rep.table.dropped_datasets;
  j["avg_ranks"] = json::array();
  for (std::size_t i = 0; i < s.methods.size(); ++i)
    j["avg_ranks"].push_back({{"method", s.methods[i]}, {"avg_rank", s.avg_ranks(static_cast<Index>(i))}});
  j["friedman_stat"] = s.friedman_stat;
  j["cd_value"] = s.cd_value;
  j["cliques"] = json::array();
  for (const auto& c : s.cliques) {
    json names = json::array();
    for (Index m : c) names.push_back(s.methods[static_cast<std::size_t>(m)]);
    j["cliques"].push_back(std::move(names));
  }
  j["ranks"] = json::array();
  for (Index i = 0; i < rep.ranks.rows(); ++i) {
    json row = json::array();
    for (Index m = 0; m < rep.ranks.cols(); ++m) row.push_back(rep.ranks(i, m));
    j["ranks"].push_back(std::move(row));
  }
  return j;
}

std::string format_text(const RankReport& rep) {
  const auto& s = rep.summary;
  std::ostringstream out;
  out << "metric=" << rep.query.metric << " experiment=" << rep.query.experiment
      << " stat=" << to_string(rep.query.stat) << " alpha=" << fixed(rep.query.alpha, 2) << "\n";
  out << "datasets: " << rep.table.datasets.size();
  if (!rep.table.dropped_datasets.empty()) {
    out << " (dropped incomplete:";
    for (const auto& d : rep.table.dropped_datasets) out << ' ' << d;
    out << ')';
  }
  out << "\n\n";
  std::size_t width = 6;
  for (const auto& m : s.methods) width = std::max(width, m.size());
  out << "method" << std::string(width - 6 + 2, ' ') << "avg_rank\n";
  for (Index m : s.order()) {
    const auto& name = s.methods[static_cast<std::size_t>(m)];
    out << name << std::string(width - name.size() + 2, ' ') << fixed(s.avg_ranks(m), 4) << "\n";
  }
  out << "\nfriedman_stat: " << fixed(s.friedman_stat, 4) << "\n";
  out << "cd_value: " << fixed(s.cd_value, 4) << "\n";
  out << "cliques:\n";
  for (const auto& c : s.cliques) {
    out << " ";
    for (Index m : c) out << ' ' << s.methods[static_cast<std::size_t>(m)];
    out << "\n";
  }
  return out.str();
}

std::string latex_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '_': case '&': case '%': case '#': case '$': case '{': case '}':
        out += '\\';
        out += c;
        break;
      case '\\': out += "\\textbackslash{}"; break;
      case '~': out += "\\textasciitilde{}"; break;
      case '^': out += "\\textasciicircum{}"; break;
      default: out += c;
    }
  }
  return out;
}

std::string format_latex(const RankReport& rep) {
  const auto& s = rep.summary;
  const auto& ds = rep.table.datasets;
  std::ostringstream out;
  out << "\\begin{tabular}{l" << std::string(ds.size(), 'r') << "r}\n\\hline\n";
  out << "Method";
  for (const auto& d : ds) out << " & " << latex_escape(d);
  out << " & Avg. rank \\\\\n\\hline\n";
  for (Index m : s.order()) {
    out << latex_escape(s.methods[static_cast<std::size_t>(m)]);
    for (Index i = 0; i < rep.ranks.rows(); ++i) out << " & " << fixed(rep.ranks(i, m), 2);
    out << " & " << fixed(s.avg_ranks(m), 2) << " \\\\\n";
  }
  out << "\\hline\n";
  out << "\\multicolumn{" << ds.size() + 2 << "}{l}{" << latex_escape(rep.query.metric) << ", "
      << latex_escape(rep.query.experiment) << ", " << to_string(rep.query.stat)
      << " ranks; Friedman $\\chi^2_F$ = " << fixed(s.friedman_stat, 4) << ", CD ($\\alpha$ = "
      << fixed(rep.query.alpha, 2) << ") = " << fixed(s.cd_value, 4) << "} \\\\\n";
  out << "\\hline\n\\end{tabular}\n";
  return out.str();
}

std::string cd_diagram_svg(const RankReport& rep) {
  const auto& s = rep.summary;
  const auto k = static_cast<double>(s.methods.size());
  const double width = 640.0, margin = 60.0, axis_y = 70.0;
  const double scale = (width - 2 * margin) / (k - 1.0);
  auto x = [&](double r) { return margin + (r - 1.0) * scale; };
  const auto order = s.order();
  const double label_gap = 18.0;
  const double half = std::ceil(static_cast<double>(order.size()) / 2.0);
  const double height = axis_y + 40.0 + 8.0 * static_cast<double>(s.cliques.size()) + label_gap * half + 20.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' ' << fixed(height, 0)
      << "\" font-family=\"sans-serif\" font-size=\"12\" data-axis-scale=\"" << fixed(scale, 6)
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // CD bar, drawn from rank 1 with length cd_value in axis units.
  out << "<g id=\"cd\" data-cd=\"" << fixed(s.cd_value, 6) << "\">"
      << "<line x1=\"" << fixed(x(1.0), 3) << "\" y1=\"20\" x2=\"" << fixed(x(1.0 + s.cd_value), 3)
      << "\" y2=\"20\" stroke=\"black\" stroke-width=\"2\"/>"
      << "<text x=\"" << fixed(x(1.0), 3) << "\" y=\"14\">CD = " << fixed(s.cd_value, 3)
      << "</text></g>\n";
  out << "<g id=\"axis\"><line x1=\"" << fixed(x(1.0), 3) << "\" y1=\"" << axis_y << "\" x2=\""
      << fixed(x(k), 3) << "\" y2=\"" << axis_y << "\" stroke=\"black\"/>";
  for (int r = 1; r <= static_cast<int>(k); ++r)
    out << "<line x1=\"" << fixed(x(r), 3) << "\" y1=\"" << axis_y - 5 << "\" x2=\"" << fixed(x(r), 3)
        << "\" y2=\"" << axis_y << "\" stroke=\"black\"/><text x=\"" << fixed(x(r), 3) << "\" y=\""
        << axis_y - 9 << "\" text-anchor=\"middle\">" << r << "</text>";
  out << "</g>\n";

  const double cliques_y = axis_y + 12.0;
  out << "<g id=\"cliques\">";
  for (std::size_t c = 0; c < s.cliques.size(); ++c) {
    const auto& clique = s.cliques[c];
    if (clique.size() < 2) continue;
    const double lo = s.avg_ranks(clique.front());
    const double hi = s.avg_ranks(clique.back());
    const double y = cliques_y + 8.0 * static_cast<double>(c);
    out << "<line x1=\"" << fixed(x(lo) - 3, 3) << "\" y1=\"" << fixed(y, 3) << "\" x2=\""
        << fixed(x(hi) + 3, 3) << "\" y2=\"" << fixed(y, 3)
        << "\" stroke=\"black\" stroke-width=\"3\"/>";
  }
  out << "</g>\n";

  const double labels_y = cliques_y + 8.0 * static_cast<double>(s.cliques.size()) + 16.0;
  out << "<g id=\"methods\">";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Index m = order[i];
    const double r = s.avg_ranks(m);
    const bool left = static_cast<double>(i) < half;
    const double row = left ? static_cast<double>(i) : static_cast<double>(order.size() - 1 - i);
    const double y = labels_y + label_gap * row;
    const double end_x = left ? margin - 10.0 : width - margin + 10.0;
    out << "<polyline fill=\"none\" stroke=\"black\" points=\"" << fixed(x(r), 3) << ',' << axis_y
        << ' ' << fixed(x(r), 3) << ',' << fixed(y, 3) << ' ' << fixed(end_x, 3) << ','
        << fixed(y, 3) << "\"/>";
    out << "<text x=\"" << fixed(left ? end_x - 4 : end_x + 4, 3) << "\" y=\"" << fixed(y + 4, 3)
        << "\" text-anchor=\"" << (left ? "end" : "start") << "\">"
        << s.methods[static_cast<std::size_t>(m)] << " (" << fixed(r, 2) << ")</text>";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string fsdem_latex(const ResultsStore& store, const std::string& metric,
                        const std::string& experiment, const std::vector<std::string>& exclude) {
  const std::string key = "FSDEM_" + metric;
  std::set<std::string> methods, datasets;
  std::map<std::pair<std::string, std::string>, double> cells;
  for (const auto& r : store.records) {
    if (r.metric != key || r.experiment != experiment) continue;
    if (excluded(exclude, r.method) || excluded(exclude, r.dataset)) continue;
    methods.insert(r.method);
    datasets.insert(r.dataset);
    cells[{r.dataset, r.method}] = r.mean;
  }
  if (cells.empty()) throw Error("no " + key + " results for experiment " + experiment);
  std::ostringstream out;
  out << "\\begin{tabular}{l" << std::string(methods.size(), 'r') << "}\n\\hline\n";
  out << "Dataset";
  for (const auto& m : methods) out << " & " << latex_escape(m);
  out << " \\\\\n\\hline\n";
  for (const auto& d : datasets) {
    out << latex_escape(d);
    for (const auto& m : methods) {
      auto it = cells.find({d, m});
      out << " & " << (it == cells.end() ? std::string("--") : fixed(it->second, 4));
    }
    out << " \\\\\n";
  }
  out << "\\hline\n\\multicolumn{" << methods.size() + 1 << "}{l}{FSDEM of "
      << latex_escape(metric) << ", " << latex_escape(experiment) << "} \\\\\n";
  out << "\\hline\n\\end{tabular}\n";
  return out.str();
}

json manifest_json(const ResultsStore& store) {
  json j;
  j["datasets"] = store.datasets();
  j["methods"] = store.methods();
  j["experiments"] = store.experiments();
  j["metrics"] = json::array();
  for (const auto& m : store.metrics())
    j["metrics"].push_back({{"name", m}, {"orientation", to_string(store.orientation_of(m))}});
  return j;
}

json curves_json(const ResultsStore& store, const std::string& metric, const std::string& experiment,
                 const std::optional<std::string>& dataset, const std::vector<std::string>& exclude) {
  json j;
  j["metric"] = metric;
  j["experiment"] = experiment;
  j["orientation"] = to_string(store.orientation_of(metric));
  j["series"] = json::array();
  const EvaluationRecord* prev = nullptr;
  for (const auto& r : store.records) {
    if (r.metric != metric || r.experiment != experiment) continue;
    if (dataset && r.dataset != *dataset) continue;
    if (excluded(exclude, r.method) || excluded(exclude, r.dataset)) continue;
    if (!prev || prev->dataset != r.dataset || prev->method != r.method)
      j["series"].push_back({{"dataset", r.dataset}, {"method", r.method}, {"points", json::array()}});
    j["series"].back()["points"].push_back(
        {{"ratio", r.ratio}, {"n_features", r.n_features}, {"mean", r.mean}, {"std", r.std}});
    prev = &r;
  }
  return j;
}

json fsdem_json(const ResultsStore& store, const std::string& experiment,
                const std::vector<std::string>& exclude) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::pair<std::optional<double>, std::optional<double>>> rows;
  for (const auto& r : store.records) {
    if (r.experiment != experiment || !is_summary_metric(r.metric)) continue;
    if (excluded(exclude, r.method) || excluded(exclude, r.dataset)) continue;
    auto& row = rows[{r.dataset, r.method, base_metric(r.metric)}];
    (starts_with(r.metric, kFsdemPrefix) ? row.first : row.second) = r.mean;
  }
  json j;
  j["experiment"] = experiment;
  j["rows"] = json::array();
  for (const auto& [key, v] : rows) {
    const auto& [d, m, metric] = key;
    j["rows"].push_back({{"dataset", d},
                         {"method", m},
                         {"metric", metric},
                         {"fsdem", v.first ? json(*v.first) : json(nullptr)},
                         {"stability", v.second ? json(*v.second) : json(nullptr)}});
  }
  return j;
}

json timings_json(const ResultsStore& store, std::optional<TimerAxis> axis) {
  json j;
  j["rows"] = json::array();
  for (const auto& t : store.timings) {
    if (axis && t.axis != *axis) continue;
    j["rows"].push_back({{"method", t.method},
                         {"axis", to_string(t.axis)},
                         {"n_instances", t.n_instances},
                         {"n_features", t.n_features},
                         {"seconds", t.seconds},
                         {"timed_out", t.timed_out}});
  }
  return j;
}

std::vector<std::string> split_names(const std::vector<std::string>& values) {
  std::vector<std::string> out;
  for (const auto& v : values)
    for (auto& part : csv::split_line(v))
      if (!part.empty()) out.push_back(std::move(part));
  return out;
}

}  // namespace fseval
