#pragma once

#include "fseval/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fseval {

// N datasets x k methods of scalar scores (e.g. FSDEM of AUC per dataset).
struct ScoreTable {
  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  MatrixXd values;
  Orientation orientation = Orientation::higher_is_better;
  // Datasets removed because a method cell was missing.
  std::vector<std::string> dropped_datasets;

  void validate() const;
};

// Builds a complete table from sparse cells keyed by (dataset, method).
// Rows with any missing method are dropped and recorded in dropped_datasets.
ScoreTable make_score_table(const std::vector<std::string>& methods,
                            const std::vector<std::string>& datasets,
                            const std::map<std::pair<std::string, std::string>, double>& cells,
                            Orientation orientation);

enum class RankFamily { standard, mars };

const char* to_string(RankFamily family);
RankFamily parse_rank_family(const std::string& s);

// Rank 1 = best per row; ties share the mean of their positions.
MatrixXd standard_ranks(const ScoreTable& table);

// Row-wise min-max normalization to s in [0, 1] (1 = best, constant rows all
// 1), then rank = 1 + (k - 1)(1 - s).
MatrixXd mars_ranks(const ScoreTable& table);

MatrixXd ranks(const ScoreTable& table, RankFamily family);

// Tabulated Nemenyi q for alpha in {0.05, 0.10} and k = 2..20.
double nemenyi_q(int k, double alpha);

// q_alpha * sqrt(k(k+1) / (6N)).
double critical_difference(int k, Index n_datasets, double alpha);

struct RankSummary {
  RankFamily family = RankFamily::standard;
  std::vector<std::string> methods;
  VectorXd avg_ranks;
  double friedman_stat = 0.0;
  double cd_value = 0.0;
  double alpha = 0.05;
  Index n_datasets = 0;
  // Method indices, each clique sorted by average rank.
  std::vector<std::vector<Index>> cliques;

  // Method indices ordered by average rank, ties by table order.
  std::vector<Index> order() const;
};

RankSummary friedman_nemenyi(const MatrixXd& rank_matrix, const std::vector<std::string>& methods,
                             double alpha, RankFamily family = RankFamily::standard);

RankSummary rank_analysis(const ScoreTable& table, RankFamily family, double alpha);

}  // namespace fseval
