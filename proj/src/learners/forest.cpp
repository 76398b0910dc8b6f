#include "fseval/learners/forest.hpp"

#include "fseval/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fseval {

namespace {

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;
};

double gini_sum(const std::vector<Index>& counts, Index total) {
  // total * gini, which keeps the weighted split comparison exact in scale
  if (total == 0) return 0.0;
  double sq = 0.0;
  for (Index c : counts) sq += static_cast<double>(c) * static_cast<double>(c);
  return static_cast<double>(total) - sq / static_cast<double>(total);
}

class TreeBuilder {
 public:
  TreeBuilder(const MatrixXd& X, const Labels& y, int n_classes, Index max_features,
              Index min_samples_split, Rng& rng)
      : X_(X), y_(y), n_classes_(n_classes), max_features_(max_features),
        min_split_(min_samples_split), rng_(rng) {}

  DecisionTree build(std::vector<Index> samples) {
    samples_ = std::move(samples);
    DecisionTree tree;
    struct Work {
      int node;
      std::size_t begin, end;
    };
    tree.nodes.emplace_back();
    std::vector<Work> stack{{0, 0, samples_.size()}};
    std::vector<int> features(static_cast<std::size_t>(X_.cols()));
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      const auto counts = class_counts(w.begin, w.end);
      const int majority = static_cast<int>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      tree.nodes[static_cast<std::size_t>(w.node)].label = majority;
      const Index size = static_cast<Index>(w.end - w.begin);
      const bool pure = counts[static_cast<std::size_t>(majority)] == size;
      if (pure || size < min_split_) continue;

      const auto split = best_split(w.begin, w.end, counts, features);
      if (split.feature < 0) continue;

      auto mid = std::stable_partition(
          samples_.begin() + static_cast<std::ptrdiff_t>(w.begin),
          samples_.begin() + static_cast<std::ptrdiff_t>(w.end),
          [&](Index i) { return X_(i, split.feature) <= split.threshold; });
      const auto m = static_cast<std::size_t>(mid - samples_.begin());
      const int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& node = tree.nodes[static_cast<std::size_t>(w.node)];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, m, w.end});
      stack.push_back({left, w.begin, m});
    }
    return tree;
  }

 private:
  std::vector<Index> class_counts(std::size_t begin, std::size_t end) const {
    std::vector<Index> counts(static_cast<std::size_t>(n_classes_), 0);
    for (std::size_t i = begin; i < end; ++i) ++counts[static_cast<std::size_t>(y_(samples_[i]))];
    return counts;
  }

  // Visits features in random order until max_features of them admit a
  // split (constant features do not count), keeping the lowest weighted Gini.
  SplitCandidate best_split(std::size_t begin, std::size_t end, const std::vector<Index>& counts,
                            std::vector<int>& features) {
    std::iota(features.begin(), features.end(), 0);
    const Index total = static_cast<Index>(end - begin);
    SplitCandidate best;
    best.impurity = std::numeric_limits<double>::infinity();
    Index visited = 0;
    std::vector<std::pair<double, int>> column(end - begin);
    std::vector<Index> left(counts.size());
    std::vector<Index> right(counts.size());
    for (std::size_t f = 0; f < features.size() && visited < max_features_; ++f) {
      const auto j = f + rng_.below(features.size() - f);
      std::swap(features[f], features[j]);
      const int feature = features[f];

      for (std::size_t i = begin; i < end; ++i)
        column[i - begin] = {X_(samples_[i], feature), y_(samples_[i])};
      std::sort(column.begin(), column.end());
      if (column.front().first == column.back().first) continue;
      ++visited;

      std::fill(left.begin(), left.end(), 0);
      right = counts;
      for (Index i = 0; i + 1 < total; ++i) {
        const auto cls = static_cast<std::size_t>(column[static_cast<std::size_t>(i)].second);
        ++left[cls];
        --right[cls];
        const double a = column[static_cast<std::size_t>(i)].first;
        const double b = column[static_cast<std::size_t>(i) + 1].first;
        if (a == b) continue;
        const double impurity = gini_sum(left, i + 1) + gini_sum(right, total - i - 1);
        if (impurity < best.impurity) {
          double threshold = a + (b - a) / 2.0;
          if (threshold >= b) threshold = a;
          best = {feature, threshold, impurity};
        }
      }
    }
    return best;
  }

  const MatrixXd& X_;
  const Labels& y_;
  int n_classes_;
  Index max_features_;
  Index min_split_;
  Rng& rng_;
  std::vector<Index> samples_;
};

class ForestPredictor final : public ProbabilisticModel {
 public:
  explicit ForestPredictor(ForestModel model) : model_(std::move(model)) {}
  MatrixXd predict_proba(const MatrixXd& X) const override {
    return forest_predict_proba(model_, X);
  }

 private:
  ForestModel model_;
};

}  // namespace

ForestModel forest_fit(const MatrixXd& X, const Labels& y, int n_classes, std::uint64_t seed,
                       const ForestParams& params) {
  if (X.rows() != y.size()) throw Error("forest_fit: X and y sizes differ");
  if (X.rows() == 0 || X.cols() == 0) throw Error("forest_fit: empty training data");
  if (params.n_trees < 1) throw Error("forest_fit: n_trees must be >= 1");
  if (n_classes < 2) throw Error("forest_fit: need at least 2 classes");
  if (y.minCoeff() < 0 || y.maxCoeff() >= n_classes) throw Error("forest_fit: label out of range");
  if (y.minCoeff() == y.maxCoeff()) throw Error("forest_fit: training labels contain a single class");

  ForestModel model;
  model.n_classes = n_classes;
  model.n_features = X.cols();
  model.feature_subsample =
      params.max_features > 0
          ? std::min(params.max_features, X.cols())
          : static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(X.cols()))));
  model.trees.reserve(static_cast<std::size_t>(params.n_trees));

  Rng rng(seed);
  const auto n = X.rows();
  for (int t = 0; t < params.n_trees; ++t) {
    std::vector<Index> samples(static_cast<std::size_t>(n));
    if (params.bootstrap) {
      for (auto& s : samples) s = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      std::sort(samples.begin(), samples.end());
    } else {
      std::iota(samples.begin(), samples.end(), Index{0});
    }
    TreeBuilder builder(X, y, n_classes, model.feature_subsample, params.min_samples_split, rng);
    model.trees.push_back(builder.build(std::move(samples)));
  }
  return model;
}

MatrixXd forest_predict_proba(const ForestModel& model, const MatrixXd& X) {
  if (X.cols() != model.n_features)
    throw Error("forest_predict_proba: expected " + std::to_string(model.n_features) +
                " features, got " + std::to_string(X.cols()));
  MatrixXd proba = MatrixXd::Zero(X.rows(), model.n_classes);
  for (const auto& tree : model.trees)
    for (Index i = 0; i < X.rows(); ++i) proba(i, tree.predict(X.row(i))) += 1.0;
  proba /= static_cast<double>(model.trees.size());
  return proba;
}

Labels predict_labels(const MatrixXd& proba) {
  Labels out(proba.rows());
  for (Index i = 0; i < proba.rows(); ++i) {
    Index best = 0;
    proba.row(i).maxCoeff(&best);
    out(i) = static_cast<int>(best);
  }
  return out;
}

std::unique_ptr<ProbabilisticModel> RandomForestClassifier::fit(const MatrixXd& X, const Labels& y,
                                                                int n_classes,
                                                                std::uint64_t seed) const {
  return std::make_unique<ForestPredictor>(forest_fit(X, y, n_classes, seed, params_));
}

std::string RandomForestClassifier::describe() const {
  return "RandomForestClassifier(n_trees=" + std::to_string(params_.n_trees) +
         ", bootstrap=" + (params_.bootstrap ? "true" : "false") +
         ", max_features=" + (params_.max_features > 0 ? std::to_string(params_.max_features) : "sqrt") +
         ", min_samples_split=" + std::to_string(params_.min_samples_split) + ")";
}

}  // namespace fseval
