#pragma once

#include "fseval/dataset.hpp"
#include "fseval/types.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fseval {

enum class SelectorKind { supervised, unsupervised };

const char* to_string(SelectorKind kind);
SelectorKind parse_selector_kind(const std::string& s);

// What a scorer sees. y is null for unsupervised selectors.
struct ScorerInput {
  const MatrixXd& X;
  const Labels* y;
  std::uint64_t seed;
};

// Returns one importance score per feature, higher = more important.
using Scorer = std::function<VectorXd(const ScorerInput&)>;

struct SelectorSpec {
  std::string name;
  SelectorKind kind = SelectorKind::unsupervised;
  bool stochastic = false;
  Scorer scorer;
};

struct FeatureRanking {
  VectorXd scores;
  std::vector<Index> order;  // descending score, ties by ascending index
};

// Sorts scores into the deterministic feature order.
FeatureRanking make_ranking(VectorXd scores);

FeatureRanking rank_features(const SelectorSpec& spec, const Dataset& dataset, std::uint64_t seed);

VectorXd random_baseline(const MatrixXd& X, std::uint64_t seed);
VectorXd variance_baseline(const MatrixXd& X);

struct GridPoint {
  double ratio;
  Index k;
};

struct RatioGrid {
  std::string experiment;
  std::vector<GridPoint> points;
};

inline const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> names{"10Percent", "100Percent"};
  return names;
}

RatioGrid build_grid(const std::string& experiment, Index n_features);

struct Subset {
  MatrixXd X;
  std::vector<Index> columns;
};

Subset take_subset(const Dataset& dataset, const FeatureRanking& ranking, Index k);

// Built-ins by name: "Random" and "Variance_Baseline".
class SelectorRegistry {
 public:
  SelectorRegistry();

  void add(SelectorSpec spec);
  bool contains(const std::string& name) const { return specs_.count(name) != 0; }
  const SelectorSpec& at(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, SelectorSpec> specs_;
};

// Wraps an external program: the dataset CSV is fed on standard input and
// one score per line is read from standard output. The seed is exported in
// FSEVAL_SEED. A non-zero exit status or malformed output raises Error. When
// timeout_seconds > 0 the child is killed after that long.
SelectorSpec make_subprocess_selector(std::string name, std::vector<std::string> command,
                                      SelectorKind kind, bool stochastic,
                                      double timeout_seconds = 0.0);

}  // namespace fseval
