#include "doctest.h"

#include "fseval/rankstats.hpp"
#include "fseval/rng.hpp"
#include "support/check.hpp"
#include "support/oracles.hpp"

#include <cmath>

using namespace fseval;
using testsupport::error_of;

namespace {

ScoreTable table(const MatrixXd& v, Orientation o = Orientation::higher_is_better) {
  ScoreTable t;
  t.values = v;
  t.orientation = o;
  for (Index j = 0; j < v.cols(); ++j) t.methods.push_back("m" + std::to_string(j));
  for (Index i = 0; i < v.rows(); ++i) t.datasets.push_back("d" + std::to_string(i));
  return t;
}

MatrixXd row(std::initializer_list<double> v) {
  MatrixXd m(1, static_cast<Index>(v.size()));
  Index j = 0;
  for (double x : v) m(0, j++) = x;
  return m;
}

}  // namespace

TEST_CASE("standard ranks") {
  CHECK(standard_ranks(table(row({0.9, 0.8, 0.1}))) == row({1, 2, 3}));
  CHECK(standard_ranks(table(row({0.5, 0.5, 0.1}))) == row({1.5, 1.5, 3}));
  CHECK(standard_ranks(table(row({0.9, 0.8, 0.1}), Orientation::lower_is_better)) == row({3, 2, 1}));
}

TEST_CASE("mars ranks") {
  const auto r = mars_ranks(table(row({0.9, 0.8, 0.1})));
  CHECK(r(0, 0) == 1.0);
  CHECK(r(0, 1) == doctest::Approx(1.25));
  CHECK(r(0, 2) == 3.0);
  CHECK(mars_ranks(table(row({0.4, 0.4, 0.4}))) == row({1, 1, 1}));
  CHECK(mars_ranks(table(row({0.9, 0.8, 0.1}), Orientation::lower_is_better))(0, 2) == 1.0);
}

TEST_CASE("random tables against oracles") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    const Index k = 2 + static_cast<Index>(rng.below(7));
    const Index n = 2 + static_cast<Index>(rng.below(8));
    MatrixXd v(n, k);
    for (Index i = 0; i < v.size(); ++i) v.data()[i] = static_cast<double>(rng.below(5)) / 4.0;
    const bool higher = rng.below(2) == 0;
    const auto tb = table(v, higher ? Orientation::higher_is_better : Orientation::lower_is_better);
    const auto sr = standard_ranks(tb);
    const auto mr = mars_ranks(tb);
    for (Index i = 0; i < n; ++i) {
      CHECK(sr.row(i).sum() == doctest::Approx(k * (k + 1) / 2.0).epsilon(1e-14));
      std::vector<double> cells;
      for (Index j = 0; j < k; ++j) cells.push_back(v(i, j));
      const auto expect = oracle::tie_average_ranks(cells, higher);
      for (Index j = 0; j < k; ++j) CHECK(sr(i, j) == expect[static_cast<std::size_t>(j)]);
      if (v.row(i).maxCoeff() != v.row(i).minCoeff()) {
        CHECK(mr.row(i).minCoeff() == 1.0);
        CHECK(mr.row(i).maxCoeff() == static_cast<double>(k));
      }
    }
    const auto s = friedman_nemenyi(sr, tb.methods, 0.05);
    CHECK(std::abs(s.friedman_stat - oracle::friedman(sr)) <= 1e-9);
    for (Index j = 0; j < k; ++j) {
      CHECK(s.avg_ranks(j) >= 1.0);
      CHECK(s.avg_ranks(j) <= static_cast<double>(k));
    }
    // Clique rule: two methods share a clique iff their gap is below CD.
    for (Index a = 0; a < k; ++a)
      for (Index b = a + 1; b < k; ++b) {
        bool together = false;
        for (const auto& c : s.cliques)
          together |= std::find(c.begin(), c.end(), a) != c.end() && std::find(c.begin(), c.end(), b) != c.end();
        CHECK(together == (std::abs(s.avg_ranks(a) - s.avg_ranks(b)) < s.cd_value));
      }
  }
}

TEST_CASE("friedman and cd") {
  const auto same = table(MatrixXd::Constant(6, 4, 0.7));
  const auto s = rank_analysis(same, RankFamily::standard, 0.05);
  CHECK(s.friedman_stat == 0.0);
  for (Index j = 0; j < 4; ++j) CHECK(s.avg_ranks(j) == 2.5);
  const auto m = rank_analysis(same, RankFamily::mars, 0.05);
  CHECK(m.friedman_stat == 0.0);
  for (Index j = 0; j < 4; ++j) CHECK(m.avg_ranks(j) == 1.0);
  CHECK(std::abs(critical_difference(3, 10, 0.05) - 2.343 * std::sqrt(12.0 / 60.0)) <= 1e-6);
  CHECK(critical_difference(3, 10, 0.05) == doctest::Approx(1.0478).epsilon(1e-4));
  CHECK(nemenyi_q(2, 0.10) == 1.645);
  CHECK(!error_of([] { nemenyi_q(21, 0.05); }).empty());
  CHECK(!error_of([] { nemenyi_q(3, 0.01); }).empty());
}

TEST_CASE("dominant method separates") {
  MatrixXd v(12, 3);
  Rng rng(3);
  for (Index i = 0; i < 12; ++i) {
    const bool flip = rng.below(2) == 0;
    v.row(i) << 1.0, flip ? 0.5 : 0.4, flip ? 0.4 : 0.5;
  }
  const auto s = rank_analysis(table(v), RankFamily::standard, 0.05);
  CHECK(s.avg_ranks(0) == 1.0);
  CHECK(s.order()[0] == 0);
  const double next = std::min(s.avg_ranks(1), s.avg_ranks(2));
  const bool alone = std::any_of(s.cliques.begin(), s.cliques.end(),
                                 [](const auto& c) { return c.size() == 1 && c[0] == 0; });
  CHECK(alone == (next - 1.0 >= s.cd_value));
}

TEST_CASE("standard and mars agree on the top method") {
  MatrixXd v(4, 3);
  v << 0.9, 0.85, 0.1, 0.8, 0.3, 0.2, 0.95, 0.9, 0.5, 0.7, 0.6, 0.65;
  const auto st = rank_analysis(table(v), RankFamily::standard, 0.05);
  const auto ma = rank_analysis(table(v), RankFamily::mars, 0.05);
  CHECK(st.order()[0] == ma.order()[0]);
  CHECK(st.avg_ranks != ma.avg_ranks);
}

TEST_CASE("score table from sparse cells drops incomplete datasets") {
  std::map<std::pair<std::string, std::string>, double> cells{
      {{"d1", "a"}, 1}, {{"d1", "b"}, 2}, {{"d2", "a"}, 3}};
  const auto t = make_score_table({"a", "b"}, {"d1", "d2"}, cells, Orientation::higher_is_better);
  CHECK(t.datasets == std::vector<std::string>{"d1"});
  CHECK(t.dropped_datasets == std::vector<std::string>{"d2"});
  CHECK(!error_of([] { friedman_nemenyi(MatrixXd::Ones(3, 1), {"a"}, 0.05); }).empty());
  CHECK(!error_of([] { standard_ranks(table(row({1, NAN}))); }).empty());
}
