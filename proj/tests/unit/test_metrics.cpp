#include "doctest.h"

#include "fseval/dataset.hpp"
#include "fseval/metrics.hpp"
#include "fseval/rng.hpp"
#include "support/check.hpp"
#include "support/oracles.hpp"
#include "support/snn.hpp"

#include <cmath>

using namespace fseval;
using testsupport::error_of;

namespace {

Labels labels(std::initializer_list<int> v) {
  Labels out(static_cast<Index>(v.size()));
  Index i = 0;
  for (int x : v) out(i++) = x;
  return out;
}

MatrixXd binary_proba(std::initializer_list<double> p1) {
  MatrixXd p(static_cast<Index>(p1.size()), 2);
  Index i = 0;
  for (double x : p1) {
    p(i, 0) = 1 - x;
    p(i, 1) = x;
    ++i;
  }
  return p;
}

}  // namespace

TEST_CASE("accuracy") {
  CHECK(accuracy(labels({0, 1, 1}), labels({0, 1, 1})) == 1.0);
  CHECK(accuracy(labels({0, 0}), labels({1, 1})) == 0.0);
  CHECK(accuracy(labels({0, 1, 1, 0}), labels({0, 1, 0, 0})) == 0.75);
  CHECK(!error_of([] { accuracy(labels({0}), labels({0, 1})); }).empty());
}

TEST_CASE("auc") {
  CHECK(auc(labels({0, 0, 1, 1}), binary_proba({0.1, 0.2, 0.8, 0.9})) == 1.0);
  CHECK(auc(labels({0, 0, 1, 1}), binary_proba({0.5, 0.5, 0.5, 0.5})) == 0.5);
  CHECK(auc(labels({0, 0, 1, 1}), binary_proba({0.1, 0.4, 0.35, 0.8})) == 0.75);

  // Three classes: macro one-vs-rest, perfectly separated.
  MatrixXd p = MatrixXd::Identity(3, 3);
  CHECK(auc(labels({0, 1, 2}), p) == 1.0);
  // A class absent from y_true has no positives and is skipped.
  MatrixXd p4 = MatrixXd::Zero(4, 3);
  p4 << 0.9, 0.1, 0, 0.8, 0.2, 0, 0.1, 0.9, 0, 0.3, 0.7, 0;
  CHECK(auc(labels({0, 0, 1, 1}), p4) == 1.0);
  CHECK(!error_of([] { auc(labels({1, 1}), binary_proba({0.2, 0.3})); }).empty());
}

TEST_CASE("clustering accuracy") {
  CHECK(clustering_accuracy(labels({0, 0, 1, 1, 2}), labels({5, 5, 3, 3, 9})) == 1.0);
  CHECK(clustering_accuracy(labels({0, 0, 1, 1}), labels({0, 1, 0, 1})) == 0.5);
  CHECK(clustering_accuracy(labels({0, 0, 1, 1}), labels({0, 0, 0, 0})) == 0.5);
}

TEST_CASE("nmi") {
  CHECK(nmi(labels({0, 0, 1, 1}), labels({1, 1, 0, 0})) == doctest::Approx(1.0));
  CHECK(nmi(labels({0, 0, 1, 1}), labels({0, 0, 0, 0})) == 0.0);
  const auto y = labels({0, 0, 1, 1});
  const auto c = labels({0, 0, 0, 1});
  // H(y) = ln 2; H(c) = -(3/4 ln 3/4 + 1/4 ln 1/4);
  // I = sum p(x,y) ln(p(x,y)/(p(x)p(y))) over cells (0,0)=2,(1,0)=1,(1,1)=1.
  const double hy = std::log(2.0);
  const double hc = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  const double mi = 0.5 * std::log(0.5 / (0.5 * 0.75)) + 0.25 * std::log(0.25 / (0.5 * 0.75)) +
                    0.25 * std::log(0.25 / (0.5 * 0.25));
  CHECK(std::abs(nmi(y, c) - mi / std::sqrt(hy * hc)) <= 1e-12);
}

TEST_CASE("metric oracles on random labelings") {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const Index n = 2 + static_cast<Index>(rng.below(7));
    Labels y(n), c(n);
    for (Index i = 0; i < n; ++i) {
      y(i) = static_cast<int>(rng.below(3));
      c(i) = static_cast<int>(rng.below(3));
    }
    CHECK(clustering_accuracy(y, c) == oracle::clustering_accuracy(y, c));
    CHECK(std::abs(nmi(y, c) - oracle::nmi(y, c)) <= 1e-12);
  }
  for (int t = 0; t < 100; ++t) {
    const Index n = 4 + static_cast<Index>(rng.below(30));
    std::vector<char> pos(static_cast<std::size_t>(n));
    VectorXd s(n);
    for (Index i = 0; i < n; ++i) {
      pos[static_cast<std::size_t>(i)] = i < 2 ? static_cast<char>(i) : static_cast<char>(rng.below(2));
      s(i) = static_cast<double>(rng.below(6)) / 5.0;  // coarse grid forces ties
    }
    CHECK(std::abs(binary_auc(pos, s) - oracle::pairwise_auc(pos, s)) <= 1e-12);
  }
}

TEST_CASE("aad") {
  const auto ds = make_synthetic(60, 12, 4, 2, 3);
  const MatrixXd Z = standardize(ds.X).first;
  std::vector<Index> all(12);
  for (Index j = 0; j < 12; ++j) all[static_cast<std::size_t>(j)] = j;
  CHECK(aad(Z, all) <= 1e-9);

  std::vector<Index> shuffled{5, 3, 11, 0, 1, 2, 4, 6, 7, 8, 9, 10};
  CHECK(aad(Z, shuffled) <= 1e-9);

  Rng rng(1);
  for (int t = 0; t < 30; ++t) {
    std::vector<Index> cols(all);
    rng.shuffle(cols.begin(), cols.end());
    cols.resize(1 + rng.below(11));
    const double v = aad(Z, cols);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(!error_of([&] { aad(Z, {}); }).empty());
  CHECK(!error_of([&] { aad(Z, {1, 1}); }).empty());
}

TEST_CASE("aad near 1 when the variance lives in dropped columns") {
  Rng rng(2);
  MatrixXd X(80, 6);
  for (Index i = 0; i < 80; ++i) {
    const double blob = i % 2 ? 10.0 : -10.0;
    for (Index j = 0; j < 3; ++j) X(i, j) = blob + rng.normal();
    for (Index j = 3; j < 6; ++j) X(i, j) = 0.01 * rng.normal();
  }
  CHECK(aad(X, {3, 4, 5}) > 0.9);
}

TEST_CASE("custom metrics") {
  const auto ds = make_synthetic(30, 6, 3, 2, 4);
  const auto snn = testsupport::snn_metric();
  CHECK(eval_custom(snn, ds.X, ds.X, ds.y) == 1.0);
  const MatrixXd four = ds.X.topRows(4);
  eval_custom(snn, four, four.leftCols(2), ds.y.head(4));
  CHECK(testsupport::last_snn_k == 3);

  const CustomMetric nan{"NaN", [](const auto&, const auto&, const auto&) { return NAN; }};
  CHECK(testsupport::contains(error_of([&] { eval_custom(nan, ds.X, ds.X, ds.y); }), "non-finite"));

  CustomMetricSet set;
  set.add(snn);
  CHECK(!error_of([&] { set.add(snn); }).empty());
  CHECK(!error_of([&] { set.add({"ACC", snn.fn}); }).empty());
  CHECK(builtin_orientation("AAD") == Orientation::lower_is_better);
  CHECK(builtin_orientation("AUC") == Orientation::higher_is_better);
}
