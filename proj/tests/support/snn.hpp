#pragma once

// Shared-nearest-neighbour consistency: the average fraction of each
// instance's k nearest neighbours (Euclidean) that survive the feature
// subset. k is clamped to n - 1.

#include "fseval/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <vector>

namespace testsupport {

inline std::vector<fseval::Index> knn(const fseval::MatrixXd& X, fseval::Index i, fseval::Index k) {
  const fseval::Index n = X.rows();
  std::vector<double> d(static_cast<std::size_t>(n));
  for (fseval::Index j = 0; j < n; ++j) d[static_cast<std::size_t>(j)] = (X.row(j) - X.row(i)).squaredNorm();
  std::vector<fseval::Index> idx;
  for (fseval::Index j = 0; j < n; ++j)
    if (j != i) idx.push_back(j);
  std::stable_sort(idx.begin(), idx.end(), [&](fseval::Index a, fseval::Index b) {
    return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)];
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

inline std::atomic<int> last_snn_k{0};

inline double snn_consistency(const fseval::MatrixXd& X_orig, const fseval::MatrixXd& X_sub,
                              const fseval::Labels&, int k = 5) {
  k = std::min<int>(k, static_cast<int>(X_orig.rows()) - 1);
  last_snn_k = k;
  double total = 0.0;
  for (fseval::Index i = 0; i < X_orig.rows(); ++i) {
    const auto a = knn(X_orig, i, k);
    const auto b = knn(X_sub, i, k);
    std::vector<fseval::Index> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    total += static_cast<double>(common.size()) / k;
  }
  return total / static_cast<double>(X_orig.rows());
}

inline fseval::CustomMetric snn_metric() {
  return {"SNN", [](const auto& a, const auto& b, const auto& y) { return snn_consistency(a, b, y); },
          fseval::Orientation::higher_is_better};
}

}  // namespace testsupport
