#include "fseval/metrics.hpp"

#include "fseval/learners/assignment.hpp"
#include "fseval/learners/pca.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace fseval {

bool is_builtin_metric(const std::string& name) {
  const auto& b = builtin_metrics();
  return std::find(b.begin(), b.end(), name) != b.end();
}

Orientation builtin_orientation(const std::string& name) {
  return name == "AAD" ? Orientation::lower_is_better : Orientation::higher_is_better;
}

double accuracy(const Labels& y_true, const Labels& y_pred) {
  if (y_true.size() != y_pred.size()) throw Error("accuracy: length mismatch");
  if (y_true.size() == 0) throw Error("accuracy: empty input");
  return static_cast<double>((y_true.array() == y_pred.array()).count()) /
         static_cast<double>(y_true.size());
}

double binary_auc(const std::vector<char>& positive, const VectorXd& scores) {
  const auto n = static_cast<Index>(positive.size());
  if (scores.size() != n) throw Error("auc: length mismatch");
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::sort(idx.begin(), idx.end(), [&](Index a, Index b) { return scores(a) < scores(b); });
  // Sum of mid-ranks of the positives.
  double rank_sum = 0.0;
  double n_pos = 0.0;
  for (Index i = 0; i < n;) {
    Index j = i;
    while (j + 1 < n && scores(idx[static_cast<std::size_t>(j + 1)]) == scores(idx[static_cast<std::size_t>(i)])) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (Index t = i; t <= j; ++t)
      if (positive[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])]) {
        rank_sum += mid;
        n_pos += 1.0;
      }
    i = j + 1;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) throw Error("auc: need both positive and negative instances");
  const double u = rank_sum - n_pos * (n_pos + 1.0) / 2.0;
  return u / (n_pos * n_neg);
}

double auc(const Labels& y_true, const MatrixXd& proba) {
  if (proba.rows() != y_true.size()) throw Error("auc: length mismatch");
  if (y_true.size() == 0) throw Error("auc: empty input");
  if (y_true.minCoeff() < 0 || y_true.maxCoeff() >= proba.cols())
    throw Error("auc: label without a probability column");
  const auto n = static_cast<std::size_t>(y_true.size());
  std::vector<char> positive(n);
  if (proba.cols() == 2) {
    for (std::size_t i = 0; i < n; ++i) positive[i] = y_true(static_cast<Index>(i)) == 1;
    return binary_auc(positive, proba.col(1));
  }
  double total = 0.0;
  int used = 0;
  for (Index c = 0; c < proba.cols(); ++c) {
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
      positive[i] = y_true(static_cast<Index>(i)) == c;
      n_pos += positive[i] ? 1 : 0;
    }
    if (n_pos == 0 || n_pos == n) continue;
    total += binary_auc(positive, proba.col(c));
    ++used;
  }
  if (used == 0) throw Error("auc: no class has both positives and negatives");
  return total / used;
}

namespace {

// Maps arbitrary ids to 0..k-1 in ascending id order.
std::vector<int> compact(const Labels& ids, int& k) {
  std::map<int, int> codes;
  for (Index i = 0; i < ids.size(); ++i) codes.emplace(ids(i), 0);
  int next = 0;
  for (auto& [id, code] : codes) code = next++;
  k = next;
  std::vector<int> out(static_cast<std::size_t>(ids.size()));
  for (Index i = 0; i < ids.size(); ++i) out[static_cast<std::size_t>(i)] = codes.at(ids(i));
  return out;
}

}  // namespace

MatrixXd contingency_table(const Labels& y_true, const Labels& clusters) {
  if (y_true.size() != clusters.size()) throw Error("contingency: length mismatch");
  int kr = 0, kc = 0;
  const auto r = compact(y_true, kr);
  const auto c = compact(clusters, kc);
  MatrixXd table = MatrixXd::Zero(kr, kc);
  for (std::size_t i = 0; i < r.size(); ++i) table(r[i], c[i]) += 1.0;
  return table;
}

double clustering_accuracy(const Labels& y_true, const Labels& clusters) {
  if (y_true.size() != clusters.size()) throw Error("clustering_accuracy: length mismatch");
  if (y_true.size() == 0) throw Error("clustering_accuracy: empty input");
  const MatrixXd table = contingency_table(y_true, clusters);
  const Index size = std::max(table.rows(), table.cols());
  MatrixXd cost = MatrixXd::Zero(size, size);
  cost.topLeftCorner(table.rows(), table.cols()) = -table;
  const auto perm = optimal_assignment(cost);
  return -assignment_cost(cost, perm) / static_cast<double>(y_true.size());
}

double nmi(const Labels& y_true, const Labels& clusters) {
  if (y_true.size() != clusters.size()) throw Error("nmi: length mismatch");
  if (y_true.size() == 0) throw Error("nmi: empty input");
  const MatrixXd table = contingency_table(y_true, clusters);
  const double n = static_cast<double>(y_true.size());
  const VectorXd a = table.rowwise().sum();
  const VectorXd b = table.colwise().sum().transpose();
  auto entropy = [n](const VectorXd& counts) {
    double h = 0.0;
    for (Index i = 0; i < counts.size(); ++i)
      if (counts(i) > 0) h -= counts(i) / n * std::log(counts(i) / n);
    return h;
  };
  const double hu = entropy(a);
  const double hv = entropy(b);
  if (hu <= 0.0 || hv <= 0.0) {
    // Identical set partitions have exactly one non-zero cell per row and column.
    const bool identical = table.rows() == table.cols() &&
                           ((table.array() > 0).rowwise().count() == 1).all() &&
                           ((table.array() > 0).colwise().count() == 1).all();
    return identical ? 1.0 : 0.0;
  }
  double mi = 0.0;
  for (Index i = 0; i < table.rows(); ++i)
    for (Index j = 0; j < table.cols(); ++j) {
      const double nij = table(i, j);
      if (nij > 0) mi += nij / n * std::log(n * nij / (a(i) * b(j)));
    }
  return std::clamp(mi / std::sqrt(hu * hv), 0.0, 1.0);
}

double aad(const MatrixXd& X_std, const std::vector<Index>& selected) {
  if (selected.empty()) throw Error("aad: empty selection");
  std::vector<Index> cols(selected);
  std::sort(cols.begin(), cols.end());
  if (std::adjacent_find(cols.begin(), cols.end()) != cols.end())
    throw Error("aad: duplicate feature index");
  if (cols.front() < 0 || cols.back() >= X_std.cols()) throw Error("aad: feature index out of range");
  const Index k = static_cast<Index>(cols.size());
  const Index m = std::min<Index>({k, X_std.rows() - 1, 10});
  if (m < 1) throw Error("aad: need at least 2 instances");

  const auto full = principal_basis(X_std, m);
  // Eigenvectors of the masked matrix live on the selected coordinates, so
  // the decomposition of the selected block embedded back is equivalent.
  const MatrixXd block = X_std(Eigen::placeholders::all, cols);
  const auto reduced = principal_basis(block, m);
  MatrixXd embedded = MatrixXd::Zero(m, X_std.cols());
  for (Index j = 0; j < k; ++j) embedded.col(cols[static_cast<std::size_t>(j)]) = reduced.components.col(j);

  double total = 0.0;
  for (Index i = 0; i < m; ++i)
    total += line_angle(full.components.row(i).transpose(), embedded.row(i).transpose());
  return total / static_cast<double>(m) / (std::numbers::pi / 2.0);
}

double eval_custom(const CustomMetric& metric, const MatrixXd& X_orig, const MatrixXd& X_sub,
                   const Labels& y) {
  if (!metric.fn) throw Error(metric.name + ": metric has no callable");
  const double v = metric.fn(X_orig, X_sub, y);
  if (!std::isfinite(v)) throw Error(metric.name + ": metric returned a non-finite value");
  return v;
}

void CustomMetricSet::add(CustomMetric metric) {
  if (metric.name.empty()) throw Error("custom metric needs a name");
  if (is_builtin_metric(metric.name))
    throw Error("custom metric name collides with built-in metric: " + metric.name);
  if (find(metric.name)) throw Error("duplicate custom metric: " + metric.name);
  metrics_.push_back(std::move(metric));
}

const CustomMetric* CustomMetricSet::find(const std::string& name) const {
  for (const auto& m : metrics_)
    if (m.name == name) return &m;
  return nullptr;
}

}  // namespace fseval
