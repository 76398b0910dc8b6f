#include "fseval/selection.hpp"

#include "fseval/rng.hpp"

#include <algorithm>
#include <numeric>

namespace fseval {

const char* to_string(SelectorKind kind) {
  return kind == SelectorKind::supervised ? "supervised" : "unsupervised";
}

SelectorKind parse_selector_kind(const std::string& s) {
  if (s == "supervised") return SelectorKind::supervised;
  if (s == "unsupervised") return SelectorKind::unsupervised;
  throw Error("unknown selector type: " + s);
}

FeatureRanking make_ranking(VectorXd scores) {
  FeatureRanking r;
  r.order.resize(static_cast<std::size_t>(scores.size()));
  std::iota(r.order.begin(), r.order.end(), Index{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](Index a, Index b) { return scores(a) > scores(b); });
  r.scores = std::move(scores);
  return r;
}

FeatureRanking rank_features(const SelectorSpec& spec, const Dataset& dataset, std::uint64_t seed) {
  if (!spec.scorer) throw Error(spec.name + ": selector has no scorer");
  const ScorerInput input{dataset.X, spec.kind == SelectorKind::supervised ? &dataset.y : nullptr,
                          seed};
  VectorXd scores = spec.scorer(input);
  if (scores.size() != dataset.n_features())
    throw Error(spec.name + ": scorer returned " + std::to_string(scores.size()) +
                " scores for " + std::to_string(dataset.n_features()) + " features");
  if (!scores.allFinite()) throw Error(spec.name + ": scorer returned non-finite scores");
  return make_ranking(std::move(scores));
}

VectorXd random_baseline(const MatrixXd& X, std::uint64_t seed) {
  if (X.size() == 0) throw Error("random_baseline: empty matrix");
  Rng rng(seed);
  VectorXd s(X.cols());
  for (Index j = 0; j < X.cols(); ++j) s(j) = rng.uniform();
  return s;
}

VectorXd variance_baseline(const MatrixXd& X) {
  if (X.size() == 0) throw Error("variance_baseline: empty matrix");
  const auto n = X.rows();
  if (n < 2) return VectorXd::Zero(X.cols());
  const VectorXd mean = X.colwise().mean().transpose();
  VectorXd var(X.cols());
  for (Index j = 0; j < X.cols(); ++j)
    var(j) = (X.col(j).array() - mean(j)).square().sum() / static_cast<double>(n - 1);
  return var;
}

RatioGrid build_grid(const std::string& experiment, Index n_features) {
  if (n_features < 1) throw Error("build_grid: n_features must be >= 1");
  // Ratios are kept as integer permille steps so k is computed exactly.
  int step_permille = 0;
  if (experiment == "10Percent")
    step_permille = 5;
  else if (experiment == "100Percent")
    step_permille = 50;
  else
    throw Error("unknown experiment: " + experiment);

  RatioGrid grid{experiment, {}};
  for (int i = 1; i <= 20; ++i) {
    const long long permille = static_cast<long long>(i) * step_permille;
    // round-half-up of permille * n / 1000
    Index k = static_cast<Index>((2 * permille * n_features + 1000) / 2000);
    k = std::clamp<Index>(k, 1, n_features);
    if (!grid.points.empty() && grid.points.back().k == k) continue;
    grid.points.push_back({static_cast<double>(permille) / 1000.0, k});
  }
  return grid;
}

Subset take_subset(const Dataset& dataset, const FeatureRanking& ranking, Index k) {
  if (k < 1 || k > dataset.n_features() ||
      k > static_cast<Index>(ranking.order.size()))
    throw Error("take_subset: k out of range");
  Subset s;
  s.columns.assign(ranking.order.begin(), ranking.order.begin() + k);
  s.X = dataset.X(Eigen::all, s.columns);
  return s;
}

SelectorRegistry::SelectorRegistry() {
  add({"Random", SelectorKind::unsupervised, true,
       [](const ScorerInput& in) { return random_baseline(in.X, in.seed); }});
  add({"Variance_Baseline", SelectorKind::unsupervised, false,
       [](const ScorerInput& in) { return variance_baseline(in.X); }});
}

void SelectorRegistry::add(SelectorSpec spec) {
  auto name = spec.name;
  specs_.insert_or_assign(std::move(name), std::move(spec));
}

const SelectorSpec& SelectorRegistry::at(const std::string& name) const {
  auto it = specs_.find(name);
  if (it == specs_.end()) throw Error("unknown method: " + name);
  return it->second;
}

std::vector<std::string> SelectorRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, spec] : specs_) out.push_back(name);
  return out;
}

}  // namespace fseval
