#include "doctest.h"

#include "fseval/csv.hpp"
#include "fseval/dataset.hpp"
#include "support/check.hpp"
#include "support/tempdir.hpp"

using namespace fseval;
using testsupport::contains;
using testsupport::error_of;

TEST_CASE("labels re-encoded by first appearance") {
  const auto ds = parse_dataset_csv("a,b,label\n1,2,z\n3,4,y\n5,6,z\n7,8,y\n", "t");
  CHECK(ds.n_classes == 2);
  CHECK(ds.class_names == std::vector<std::string>{"z", "y"});
  CHECK(ds.y(0) == 0);
  CHECK(ds.y(1) == 1);
  CHECK(ds.X(2, 1) == 6.0);
  CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load errors") {
  CHECK(contains(error_of([] { parse_dataset_csv("a,l\n1,x\nnan,y\n1,x\n2,y\n", "t"); }), "non-finite"));
  CHECK(contains(error_of([] { parse_dataset_csv("a,l\n1,x\nfoo,y\n", "t"); }), "non-numeric"));
  CHECK(contains(error_of([] { parse_dataset_csv("a,l\n1,x\n2,x\n", "t"); }), "fewer than 2 classes"));
  CHECK(contains(error_of([] { parse_dataset_csv("a,l\n1,a\n2,a\n3,a\n4,b\n", "t"); }),
                 "fewer than 2 instances"));
  CHECK(contains(error_of([] { load_dataset("/nonexistent/x.csv", "x"); }), "not found"));
}

TEST_CASE("CSV round trip is exact") {
  testsupport::TempDir dir("ds");
  const auto ds = make_synthetic(40, 7, 3, 3, 11);
  write_dataset(ds, dir / "s.csv");
  const auto back = load_dataset(dir / "s.csv", "s");
  CHECK(back.X == ds.X);
  CHECK(back.y == ds.y);
  CHECK(back.n_classes == 3);
}

TEST_CASE("make_synthetic is a pure function of its arguments") {
  const auto a = make_synthetic(50, 8, 4, 2, 5);
  const auto b = make_synthetic(50, 8, 4, 2, 5);
  const auto c = make_synthetic(50, 8, 4, 2, 6);
  CHECK(a.X == b.X);
  CHECK(a.y == b.y);
  CHECK(a.X != c.X);
  const auto counts = class_counts(a.y, 2);
  CHECK(counts[0] == 25);
  CHECK(counts[1] == 25);
}

TEST_CASE("standardize uses sample std and centers constant columns") {
  MatrixXd X(3, 2);
  X << 1, 5, 2, 5, 3, 5;
  const auto [Z, stats] = standardize(X);
  CHECK(stats.mean(0) == 2.0);
  CHECK(stats.std(0) == doctest::Approx(1.0));
  CHECK(stats.std(1) == 0.0);
  CHECK(Z(0, 0) == doctest::Approx(-1.0));
  CHECK(Z(1, 0) == doctest::Approx(0.0));
  CHECK(Z(2, 0) == doctest::Approx(1.0));
  CHECK(Z.col(1).isZero());
}

TEST_CASE("standardize transform mode reproduces fit mode and shifts held-out data") {
  MatrixXd X(6, 2);
  X << 1, 2, 4, 1, 2, 7, 9, 3, 5, 5, 0, 8;
  const auto [Z, stats] = standardize(X);
  const auto [Z2, stats2] = standardize(X, stats);
  CHECK(Z2 == Z);
  const MatrixXd train = X.topRows(4);
  const MatrixXd test = X.bottomRows(2);
  const auto fitted = standardize(train);
  const auto held = standardize(test, fitted.second).first;
  CHECK(std::abs(held.col(0).mean()) > 1e-3);
  MatrixXd wrong(2, 3);
  wrong.setOnes();
  CHECK(!error_of([&] { standardize(wrong, stats); }).empty());
}
