#pragma once

#include "fseval/types.hpp"

#include <vector>

namespace fseval {

struct KMeansResult {
  Labels assignments;
  MatrixXd centroids;  // k x d
  double inertia = 0.0;
  int iterations = 0;
  // Inertia after each assignment step; non-increasing.
  std::vector<double> inertia_history;
};

// k-means++ seeding followed by Lloyd iterations until the assignment stops
// changing or max_iter updates have run. An emptied cluster is re-seeded at
// the point farthest from its current centroid.
KMeansResult kmeans(const MatrixXd& X, int k, std::uint64_t seed, int max_iter = 300);

}  // namespace fseval
