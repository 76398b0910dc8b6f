#include "fseval/dataset.hpp"

#include "fseval/csv.hpp"
#include "fseval/rng.hpp"

#include <unordered_map>

namespace fseval {

std::vector<Index> class_counts(const Labels& y, int n_classes) {
  std::vector<Index> counts(static_cast<std::size_t>(n_classes), 0);
  for (Index i = 0; i < y.size(); ++i) {
    if (y(i) < 0 || y(i) >= n_classes) throw Error("label out of range");
    ++counts[static_cast<std::size_t>(y(i))];
  }
  return counts;
}

void Dataset::validate() const {
  if (n_instances() < 2) throw Error(name + ": need at least 2 instances");
  if (n_features() < 1) throw Error(name + ": need at least 1 feature");
  if (n_classes < 2) throw Error(name + ": need at least 2 classes");
  if (y.size() != n_instances()) throw Error(name + ": label count does not match instance count");
  if (!X.allFinite()) throw Error(name + ": non-finite value in feature matrix");
  for (Index c : class_counts(y, n_classes))
    if (c == 0) throw Error(name + ": a class has no instances");
}

Dataset parse_dataset_csv(const std::string& text, const std::string& name) {
  const auto rows = csv::lines(text);
  if (rows.empty()) throw Error(name + ": empty dataset file");
  const auto header = csv::split_line(rows[0]);
  if (header.size() < 2) throw Error(name + ": need at least one feature column and a label column");
  const auto n_cols = header.size();
  const auto n_features = static_cast<Index>(n_cols - 1);
  const auto n_rows = static_cast<Index>(rows.size() - 1);

  Dataset ds;
  ds.name = name;
  ds.feature_names.assign(header.begin(), header.end() - 1);
  ds.X.resize(n_rows, n_features);
  ds.y.resize(n_rows);
  std::unordered_map<std::string, int> codes;
  for (Index i = 0; i < n_rows; ++i) {
    const auto fields = csv::split_line(rows[static_cast<std::size_t>(i) + 1]);
    const auto line_no = std::to_string(i + 2);
    if (fields.size() != n_cols)
      throw Error(name + ": line " + line_no + " has " + std::to_string(fields.size()) +
                  " fields, expected " + std::to_string(n_cols));
    for (Index j = 0; j < n_features; ++j) {
      const auto v = csv::parse_double(fields[static_cast<std::size_t>(j)]);
      if (!v) throw Error(name + ": non-numeric feature cell at line " + line_no);
      if (!std::isfinite(*v)) throw Error(name + ": non-finite value at line " + line_no);
      ds.X(i, j) = *v;
    }
    const auto& label = fields.back();
    auto [it, inserted] = codes.try_emplace(label, static_cast<int>(codes.size()));
    if (inserted) ds.class_names.push_back(label);
    ds.y(i) = it->second;
  }
  ds.n_classes = static_cast<int>(codes.size());
  if (ds.n_classes < 2) throw Error(name + ": fewer than 2 classes");
  const auto counts = class_counts(ds.y, ds.n_classes);
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] < 2)
      throw Error(name + ": class '" + ds.class_names[c] + "' has fewer than 2 instances");
  ds.validate();
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, const std::string& name) {
  if (!std::filesystem::exists(path)) throw Error("dataset file not found: " + path.string());
  return parse_dataset_csv(csv::read_file(path), name);
}

std::string to_csv(const Dataset& ds) {
  std::string out;
  for (Index j = 0; j < ds.n_features(); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    out += csv::escape(idx < ds.feature_names.size() ? ds.feature_names[idx] : "f" + std::to_string(j));
    out += ',';
  }
  out += "label\n";
  for (Index i = 0; i < ds.n_instances(); ++i) {
    for (Index j = 0; j < ds.n_features(); ++j) {
      out += csv::format_roundtrip(ds.X(i, j));
      out += ',';
    }
    const auto c = static_cast<std::size_t>(ds.y(i));
    out += csv::escape(c < ds.class_names.size() ? ds.class_names[c] : std::to_string(c));
    out += '\n';
  }
  return out;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& path) {
  csv::write_file_atomic(path, to_csv(ds));
}

Dataset make_synthetic(Index n_instances, Index n_features, Index n_informative, int n_classes,
                       std::uint64_t seed) {
  if (n_classes < 2) throw Error("make_synthetic: n_classes must be >= 2");
  if (n_informative < 1 || n_informative > n_features)
    throw Error("make_synthetic: need 1 <= n_informative <= n_features");
  if (n_instances < 2 * static_cast<Index>(n_classes))
    throw Error("make_synthetic: need n_instances >= 2 * n_classes");

  Dataset ds;
  ds.name = "synthetic";
  ds.n_classes = n_classes;
  ds.X.resize(n_instances, n_features);
  ds.y.resize(n_instances);
  for (Index i = 0; i < n_instances; ++i) ds.y(i) = static_cast<int>(i % n_classes);

  Rng rng(seed);
  // Each informative column gets its own assignment of the means
  // {0, 2, ..., 2(C-1)} to classes, so columns are not redundant copies.
  std::vector<int> perm(static_cast<std::size_t>(n_classes));
  for (Index j = 0; j < n_features; ++j) {
    const bool informative = j < n_informative;
    if (informative) {
      for (int c = 0; c < n_classes; ++c) perm[static_cast<std::size_t>(c)] = c;
      rng.shuffle(perm.begin(), perm.end());
    }
    for (Index i = 0; i < n_instances; ++i) {
      const double mean = informative ? 2.0 * perm[static_cast<std::size_t>(ds.y(i))] : 0.0;
      ds.X(i, j) = mean + rng.normal();
    }
  }
  for (Index j = 0; j < n_features; ++j) ds.feature_names.push_back("f" + std::to_string(j));
  for (int c = 0; c < n_classes; ++c) ds.class_names.push_back(std::to_string(c));
  return ds;
}

}  // namespace fseval
