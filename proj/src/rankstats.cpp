#include "fseval/rankstats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace fseval {

namespace {

// q_alpha for the two-tailed Nemenyi test, k = 2..20 (studentized range
// quantile over sqrt(2)). k <= 10 from Demsar (2006).
constexpr std::array<double, 19> kQ005{1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031,
                                       3.102, 3.164, 3.219, 3.268, 3.313, 3.354, 3.391,
                                       3.426, 3.458, 3.489, 3.517, 3.544};
constexpr std::array<double, 19> kQ010{1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780,
                                       2.855, 2.920, 2.978, 3.030, 3.077, 3.120, 3.159,
                                       3.196, 3.230, 3.261, 3.291, 3.319};

}  // namespace

void ScoreTable::validate() const {
  if (values.rows() != static_cast<Index>(datasets.size()) ||
      values.cols() != static_cast<Index>(methods.size()))
    throw Error("score table shape does not match its labels");
  if (!values.allFinite()) throw Error("score table contains a non-finite cell");
}

ScoreTable make_score_table(const std::vector<std::string>& methods,
                            const std::vector<std::string>& datasets,
                            const std::map<std::pair<std::string, std::string>, double>& cells,
                            Orientation orientation) {
  ScoreTable t;
  t.methods = methods;
  t.orientation = orientation;
  std::vector<std::vector<double>> rows;
  for (const auto& d : datasets) {
    std::vector<double> row;
    for (const auto& m : methods) {
      auto it = cells.find({d, m});
      if (it == cells.end() || !std::isfinite(it->second)) break;
      row.push_back(it->second);
    }
    if (row.size() == methods.size()) {
      t.datasets.push_back(d);
      rows.push_back(std::move(row));
    } else {
      t.dropped_datasets.push_back(d);
    }
  }
  t.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(methods.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < methods.size(); ++j)
      t.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return t;
}

const char* to_string(RankFamily family) {
  return family == RankFamily::standard ? "standard" : "mars";
}

RankFamily parse_rank_family(const std::string& s) {
  if (s == "standard") return RankFamily::standard;
  if (s == "mars") return RankFamily::mars;
  throw Error("unknown rank statistic: " + s + " (expected standard or mars)");
}

MatrixXd standard_ranks(const ScoreTable& table) {
  table.validate();
  const Index k = table.values.cols();
  const bool higher = table.orientation == Orientation::higher_is_better;
  MatrixXd r(table.values.rows(), k);
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < table.values.rows(); ++i) {
    const auto row = table.values.row(i);
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
      return higher ? row(a) > row(b) : row(a) < row(b);
    });
    for (Index p = 0; p < k;) {
      Index q = p;
      while (q + 1 < k && row(idx[static_cast<std::size_t>(q + 1)]) == row(idx[static_cast<std::size_t>(p)])) ++q;
      const double mid = (static_cast<double>(p + 1) + static_cast<double>(q + 1)) / 2.0;
      for (Index t = p; t <= q; ++t) r(i, idx[static_cast<std::size_t>(t)]) = mid;
      p = q + 1;
    }
  }
  return r;
}

MatrixXd mars_ranks(const ScoreTable& table) {
  table.validate();
  const Index k = table.values.cols();
  const bool higher = table.orientation == Orientation::higher_is_better;
  MatrixXd r(table.values.rows(), k);
  for (Index i = 0; i < table.values.rows(); ++i) {
    const auto row = table.values.row(i);
    const double lo = row.minCoeff();
    const double hi = row.maxCoeff();
    for (Index j = 0; j < k; ++j) {
      double s = 1.0;
      if (hi > lo) s = higher ? (row(j) - lo) / (hi - lo) : (hi - row(j)) / (hi - lo);
      r(i, j) = 1.0 + static_cast<double>(k - 1) * (1.0 - s);
    }
  }
  return r;
}

MatrixXd ranks(const ScoreTable& table, RankFamily family) {
  return family == RankFamily::standard ? standard_ranks(table) : mars_ranks(table);
}

double nemenyi_q(int k, double alpha) {
  if (k < 2) throw Error("nemenyi_q: need at least 2 methods");
  if (k > 20) throw Error("nemenyi_q: tabulated only up to 20 methods");
  const auto i = static_cast<std::size_t>(k - 2);
  if (std::abs(alpha - 0.05) < 1e-12) return kQ005[i];
  if (std::abs(alpha - 0.10) < 1e-12) return kQ010[i];
  throw Error("nemenyi_q: alpha must be 0.05 or 0.10");
}

double critical_difference(int k, Index n_datasets, double alpha) {
  if (n_datasets < 1) throw Error("critical_difference: need at least one dataset");
  return nemenyi_q(k, alpha) *
         std::sqrt(static_cast<double>(k) * (k + 1) / (6.0 * static_cast<double>(n_datasets)));
}

std::vector<Index> RankSummary::order() const {
  std::vector<Index> idx(static_cast<std::size_t>(avg_ranks.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return avg_ranks(a) < avg_ranks(b); });
  return idx;
}

RankSummary friedman_nemenyi(const MatrixXd& rank_matrix, const std::vector<std::string>& methods,
                             double alpha, RankFamily family) {
  const Index n = rank_matrix.rows();
  const Index k = rank_matrix.cols();
  if (k < 2) throw Error("fewer than 2 methods");
  if (n < 2) throw Error("fewer than 2 datasets");
  if (static_cast<Index>(methods.size()) != k) throw Error("method names do not match rank matrix");

  RankSummary s;
  s.family = family;
  s.methods = methods;
  s.alpha = alpha;
  s.n_datasets = n;
  s.avg_ranks = rank_matrix.colwise().mean().transpose();
  const double kk = static_cast<double>(k);
  // Sum of squared deviations from the mean average rank. For standard ranks
  // the mean is (k+1)/2 and this equals sum R_j^2 - k(k+1)^2/4; MARS rows do
  // not sum to k(k+1)/2, so the centred form is the one that stays at 0 for
  // an all-identical table.
  const double spread = (s.avg_ranks.array() - s.avg_ranks.mean()).square().sum();
  s.friedman_stat = 12.0 * static_cast<double>(n) / (kk * (kk + 1.0)) * spread;
  if (std::abs(s.friedman_stat) < 1e-12) s.friedman_stat = 0.0;
  s.cd_value = critical_difference(static_cast<int>(k), n, alpha);

  const auto ord = s.order();
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < ord.size(); ++i) {
    std::size_t end = i;
    while (end + 1 < ord.size() && s.avg_ranks(ord[end + 1]) - s.avg_ranks(ord[i]) < s.cd_value) ++end;
    if (i > 0 && end <= prev_end) continue;  // contained in the previous run
    s.cliques.emplace_back(ord.begin() + static_cast<std::ptrdiff_t>(i),
                           ord.begin() + static_cast<std::ptrdiff_t>(end) + 1);
    prev_end = end;
  }
  return s;
}

RankSummary rank_analysis(const ScoreTable& table, RankFamily family, double alpha) {
  return friedman_nemenyi(ranks(table, family), table.methods, alpha, family);
}

}  // namespace fseval
