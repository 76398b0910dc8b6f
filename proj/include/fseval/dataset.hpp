#pragma once

#include "fseval/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fseval {

// Numeric feature matrix with integer class labels.
//
// Invariants (checked by validate()): at least 2 instances, 1 feature and
// 2 classes; every value in X finite; every label in [0, n_classes) and
// every class present.
struct Dataset {
  std::string name;
  MatrixXd X;
  Labels y;
  int n_classes = 0;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;

  Index n_instances() const { return X.rows(); }
  Index n_features() const { return X.cols(); }

  void validate() const;
};

// Per-class instance counts, indexed by class id.
std::vector<Index> class_counts(const Labels& y, int n_classes);

// Reads the dataset CSV format: header row, decimal feature cells, label in
// the last column. Labels are re-encoded 0..C-1 by first appearance.
Dataset load_dataset(const std::filesystem::path& path, const std::string& name);

// Parses the same format from an in-memory string.
Dataset parse_dataset_csv(const std::string& text, const std::string& name);

// Writes a dataset in the CSV format; values are written in shortest
// round-trip form so load_dataset reproduces X exactly.
std::string to_csv(const Dataset& dataset);
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

// Class-conditional Gaussian data. The first n_informative columns have
// unit variance and class means 2 apart; the rest are standard normal noise.
// Classes are assigned round-robin so counts differ by at most one.
Dataset make_synthetic(Index n_instances, Index n_features, Index n_informative, int n_classes,
                       std::uint64_t seed);

template <typename Scalar>
struct ColumnStats {
  Vector<Scalar> mean;
  Vector<Scalar> std;  // sample std (n-1); 0 for constant columns
};

// Fit mode when stats is empty, transform mode otherwise. Columns with zero
// std are centered and left unscaled.
template <typename Derived>
std::pair<Matrix<ScalarOf<Derived>>, ColumnStats<ScalarOf<Derived>>> standardize(
    const Eigen::MatrixBase<Derived>& X,
    const std::optional<ColumnStats<ScalarOf<Derived>>>& stats = std::nullopt) {
  using Scalar = ScalarOf<Derived>;
  if (X.size() == 0) throw Error("standardize: empty matrix");
  ColumnStats<Scalar> used;
  if (stats) {
    if (stats->mean.size() != X.cols() || stats->std.size() != X.cols())
      throw Error("standardize: stats dimensionality mismatch");
    used = *stats;
  } else {
    const auto n = X.rows();
    used.mean = X.colwise().mean().transpose();
    used.std.resize(X.cols());
    for (Index j = 0; j < X.cols(); ++j) {
      if (n < 2) {
        used.std(j) = Scalar(0);
        continue;
      }
      const Scalar ss = (X.col(j).array() - used.mean(j)).square().sum();
      used.std(j) = std::sqrt(ss / Scalar(n - 1));
    }
  }
  Matrix<Scalar> out = X.rowwise() - used.mean.transpose();
  for (Index j = 0; j < X.cols(); ++j)
    if (used.std(j) > Scalar(0)) out.col(j) /= used.std(j);
  return {std::move(out), std::move(used)};
}

}  // namespace fseval
