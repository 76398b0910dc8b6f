#pragma once

#include "fseval/types.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fseval {

// Built-in metric names in their canonical order.
inline const std::vector<std::string>& builtin_metrics() {
  static const std::vector<std::string> names{"CLSACC", "NMI", "ACC", "AUC", "AAD"};
  return names;
}

bool is_builtin_metric(const std::string& name);

// AAD is the only built-in where lower is better.
Orientation builtin_orientation(const std::string& name);

struct MetricValue {
  std::string metric;
  double value = 0.0;
  Orientation orientation = Orientation::higher_is_better;
};

double accuracy(const Labels& y_true, const Labels& y_pred);

// Mann-Whitney AUC for binary problems, macro one-vs-rest otherwise.
// proba has one column per class id.
double auc(const Labels& y_true, const MatrixXd& proba);

// Binary AUC of positive-class scores; ties count one half.
double binary_auc(const std::vector<char>& positive, const VectorXd& scores);

// Class x cluster contingency counts. Cluster ids may be arbitrary integers;
// they are compacted in ascending id order.
MatrixXd contingency_table(const Labels& y_true, const Labels& clusters);

double clustering_accuracy(const Labels& y_true, const Labels& clusters);

// I(U;V) / sqrt(H(U) H(V)), natural log. When either entropy is 0 the
// result is 1 for identical set partitions and 0 otherwise.
double nmi(const Labels& y_true, const Labels& clusters);

// Mean principal-direction angle between X_std and X_std with the
// unselected columns zeroed, over m = min(k, n-1, 10) components,
// normalized to [0, 1]. Lower is better.
double aad(const MatrixXd& X_std, const std::vector<Index>& selected);

using CustomMetricFn =
    std::function<double(const MatrixXd& X_orig, const MatrixXd& X_sub, const Labels& y)>;

struct CustomMetric {
  std::string name;
  CustomMetricFn fn;
  Orientation orientation = Orientation::higher_is_better;
};

// Calls metric.fn; a non-finite result raises Error.
double eval_custom(const CustomMetric& metric, const MatrixXd& X_orig, const MatrixXd& X_sub,
                   const Labels& y);

// Name-checked collection of custom metrics.
class CustomMetricSet {
 public:
  void add(CustomMetric metric);
  const std::vector<CustomMetric>& all() const { return metrics_; }
  const CustomMetric* find(const std::string& name) const;
  bool empty() const { return metrics_.empty(); }

 private:
  std::vector<CustomMetric> metrics_;
};

}  // namespace fseval
