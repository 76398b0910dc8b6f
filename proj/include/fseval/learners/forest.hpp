#pragma once

#include "fseval/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fseval {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
};

// Axis-aligned tree; x goes left when x[feature] <= threshold.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  template <typename Row>
  int predict(const Row& x) const {
    int n = 0;
    while (nodes[static_cast<std::size_t>(n)].feature >= 0) {
      const auto& node = nodes[static_cast<std::size_t>(n)];
      n = x(node.feature) <= node.threshold ? node.left : node.right;
    }
    return nodes[static_cast<std::size_t>(n)].label;
  }
};

struct ForestParams {
  int n_trees = 100;
  bool bootstrap = true;
  Index max_features = 0;  // 0 selects ceil(sqrt(d))
  Index min_samples_split = 2;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  int n_classes = 0;
  Index n_features = 0;
  Index feature_subsample = 0;
};

// Gini-split random forest. Deterministic given seed.
ForestModel forest_fit(const MatrixXd& X, const Labels& y, int n_classes, std::uint64_t seed,
                       const ForestParams& params = {});

// Row i, column c = fraction of trees voting for class c.
MatrixXd forest_predict_proba(const ForestModel& model, const MatrixXd& X);

// Argmax per row, ties to the lowest class id.
Labels predict_labels(const MatrixXd& proba);

// Fit/predict_proba contract the evaluator runs against.
class ProbabilisticModel {
 public:
  virtual ~ProbabilisticModel() = default;
  virtual MatrixXd predict_proba(const MatrixXd& X) const = 0;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::unique_ptr<ProbabilisticModel> fit(const MatrixXd& X, const Labels& y,
                                                  int n_classes, std::uint64_t seed) const = 0;
  virtual std::string describe() const = 0;
};

class RandomForestClassifier final : public Classifier {
 public:
  explicit RandomForestClassifier(ForestParams params = {}) : params_(params) {}

  std::unique_ptr<ProbabilisticModel> fit(const MatrixXd& X, const Labels& y, int n_classes,
                                          std::uint64_t seed) const override;
  std::string describe() const override;
  const ForestParams& params() const { return params_; }

 private:
  ForestParams params_;
};

}  // namespace fseval
