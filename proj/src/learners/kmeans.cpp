#include "fseval/learners/kmeans.hpp"

#include "fseval/rng.hpp"

#include <limits>

namespace fseval {

namespace {

// Nearest centroid per row (ties to the lowest index); returns inertia.
double assign(const MatrixXd& X, const MatrixXd& centroids, Labels& labels, VectorXd& dist) {
  double inertia = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Index c = 0; c < centroids.rows(); ++c) {
      const double d = (X.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    labels(i) = best_c;
    dist(i) = best;
    inertia += best;
  }
  return inertia;
}

MatrixXd plus_plus_init(const MatrixXd& X, int k, Rng& rng) {
  const Index n = X.rows();
  MatrixXd centroids(k, X.cols());
  centroids.row(0) = X.row(static_cast<Index>(rng.below(static_cast<std::uint64_t>(n))));
  VectorXd d2(n);
  for (Index i = 0; i < n; ++i) d2(i) = (X.row(i) - centroids.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (acc > target && d2(i) > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centroids.row(c) = X.row(pick);
    for (Index i = 0; i < n; ++i)
      d2(i) = std::min(d2(i), (X.row(i) - centroids.row(c)).squaredNorm());
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const MatrixXd& X, int k, std::uint64_t seed, int max_iter) {
  if (k < 1) throw Error("kmeans: k must be >= 1");
  if (X.rows() == 0) throw Error("kmeans: empty data");
  if (k > X.rows()) throw Error("kmeans: k exceeds the number of instances");
  if (max_iter < 1) throw Error("kmeans: max_iter must be >= 1");

  Rng rng(seed);
  KMeansResult r;
  r.centroids = plus_plus_init(X, k, rng);
  const Index n = X.rows();
  r.assignments.resize(n);
  VectorXd dist(n);
  r.inertia_history.push_back(assign(X, r.centroids, r.assignments, dist));

  Labels next(n);
  std::vector<Index> sizes(static_cast<std::size_t>(k));
  for (int iter = 0; iter < max_iter; ++iter) {
    r.centroids.setZero();
    std::fill(sizes.begin(), sizes.end(), 0);
    for (Index i = 0; i < n; ++i) {
      r.centroids.row(r.assignments(i)) += X.row(i);
      ++sizes[static_cast<std::size_t>(r.assignments(i))];
    }
    for (int c = 0; c < k; ++c)
      if (sizes[static_cast<std::size_t>(c)] > 0)
        r.centroids.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
    for (int c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) continue;
      Index far = 0;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        const double d = (X.row(i) - r.centroids.row(r.assignments(i))).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      r.centroids.row(c) = X.row(far);
      --sizes[static_cast<std::size_t>(r.assignments(far))];
      r.assignments(far) = c;
      sizes[static_cast<std::size_t>(c)] = 1;
    }
    const double inertia = assign(X, r.centroids, next, dist);
    r.inertia_history.push_back(inertia);
    r.iterations = iter + 1;
    const bool converged = next == r.assignments;
    r.assignments = next;
    if (converged) break;
  }
  r.inertia = r.inertia_history.back();
  return r;
}

}  // namespace fseval
