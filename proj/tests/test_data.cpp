#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "sdr/dataset.hpp"
#include "sdr/rng.hpp"
#include "test_util.hpp"

using sdr::Dataset;

namespace {

struct TempCsv {
  std::string path;
  explicit TempCsv(const std::string& contents) {
    static int counter = 0;
    path = "test_data_tmp_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path);
    out << contents;
  }
  ~TempCsv() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_csv by name and by negative index") {
  TempCsv file("x1,x2,y\n1,0,1\n0,1,0\n");
  const Dataset by_name = sdr::load_csv(file.path, "y");
  CHECK(by_name.n() == 2);
  CHECK(by_name.dim() == 2);
  CHECK(by_name.y(0) == 1.0);
  CHECK(by_name.x(1, 1) == 1.0);
  CHECK(by_name.feature_names == std::vector<std::string>{"x1", "x2"});

  const Dataset by_index = sdr::load_csv(file.path, -1);
  CHECK(by_index.x == by_name.x);
  CHECK(by_index.y == by_name.y);
}

TEST_CASE("load_csv reports the offending cell") {
  TempCsv file("x1,x2,y\n1,NA,1\n");
  CHECK_THROWS_WITH_AS(sdr::load_csv(file.path, "y"),
                       doctest::Contains("column 'x2'"), std::runtime_error);
  TempCsv empty("");
  CHECK_THROWS_AS(sdr::load_csv(empty.path, "y"), std::runtime_error);
  TempCsv missing("x1,x2,y\n1,2,3\n");
  CHECK_THROWS_WITH_AS(sdr::load_csv(missing.path, "target"),
                       doctest::Contains("'target'"), std::runtime_error);
}

TEST_CASE("csv round trip") {
  sdr::Rng rng(3);
  const Dataset ds = sdr::testutil::random_dataset(rng, 20, 4);
  TempCsv file("");
  sdr::save_csv(ds, file.path);
  const Dataset back = sdr::load_csv(file.path, "y");
  CHECK((back.x - ds.x).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((back.y - ds.y).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("standardize_features maps each column onto [-1,1]") {
  Eigen::MatrixXd x(3, 3);
  x << 0, 3, -2, 5, 3, 0, 10, 3, 2;
  Eigen::VectorXd y(3);
  y << 1, 2, 3;
  const auto [out, maps] = sdr::standardize_features(sdr::make_dataset(x, y));
  CHECK(out.x(0, 0) == doctest::Approx(-1.0));
  CHECK(out.x(1, 0) == doctest::Approx(0.0));
  CHECK(out.x(2, 0) == doctest::Approx(1.0));
  // constant column collapses to zero
  CHECK(out.x.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.x(0, 2) == doctest::Approx(-1.0));
  CHECK(out.x(2, 2) == doctest::Approx(1.0));
  // maps invert where defined
  CHECK(maps[0].invert(maps[0].apply(7.0)) == doctest::Approx(7.0));
}

TEST_CASE("log_transform_response") {
  Eigen::MatrixXd x(2, 1);
  x << 1, 2;
  Eigen::VectorXd y(2);
  y << 1.0, std::exp(1.0);
  const Dataset out = sdr::log_transform_response(sdr::make_dataset(x, y), 0.0);
  CHECK(out.y(0) == doctest::Approx(0.0));
  CHECK(out.y(1) == doctest::Approx(1.0));

  Eigen::VectorXd zero(1);
  zero << 0.0;
  Eigen::MatrixXd x1(1, 1);
  x1 << 1;
  CHECK(sdr::log_transform_response(sdr::make_dataset(x1, zero), 1.0).y(0) ==
        doctest::Approx(0.0));

  Eigen::VectorXd neg(1);
  neg << -1.0;
  CHECK_THROWS_AS(sdr::log_transform_response(sdr::make_dataset(x1, neg), 0.0),
                  std::invalid_argument);
}

TEST_CASE("dyadic_partition equal-width edges") {
  Eigen::VectorXd y(5);
  y << 0.0, 0.3, 0.6, 0.9, 1.0;
  const auto part = sdr::dyadic_partition(y, 4);
  REQUIRE(part.edges.size() == 5);
  CHECK(part.edges[0] == doctest::Approx(0.0));
  CHECK(part.edges[1] == doctest::Approx(0.25));
  CHECK(part.edges[2] == doctest::Approx(0.5));
  CHECK(part.edges[3] == doctest::Approx(0.75));
  CHECK(part.edges[4] == doctest::Approx(1.0));

  Eigen::VectorXd constant = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(sdr::dyadic_partition(constant, 2), std::invalid_argument);
  CHECK_THROWS_AS(sdr::dyadic_partition(y, 0), std::invalid_argument);
}

TEST_CASE("partition and assignment of a small sample") {
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 5;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 1);
  const auto part = sdr::dyadic_partition(y, 2);
  CHECK(part.edges[1] == doctest::Approx(3.0));
  const auto assign = sdr::assign_level_sets(sdr::make_dataset(x, y), part);
  REQUIRE(assign.count() == 2);
  CHECK(assign.levels[0] == std::vector<Eigen::Index>{0, 1});  // responses 1, 2
  CHECK(assign.levels[1] == std::vector<Eigen::Index>{2, 3});  // responses 3, 5

  // J = 1 puts everything in a single interval.
  const auto single = sdr::assign_level_sets(sdr::make_dataset(x, y), sdr::dyadic_partition(y, 1));
  CHECK(single.levels[0].size() == 4);
}

TEST_CASE("assignment uses the half-open boundary rule") {
  // Interior edge values belong to the right interval; the bottom edge and
  // the closed top interval catch the extremes.
  sdr::ResponsePartition part;
  part.edges = {0.0, 0.45, 0.9};
  Eigen::VectorXd y(4);
  y << 0.05, 0.3, 0.55, 0.9;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 1);
  const auto assign = sdr::assign_level_sets(sdr::make_dataset(x, y), part);
  CHECK(assign.levels[0] == std::vector<Eigen::Index>{0, 1});
  CHECK(assign.levels[1] == std::vector<Eigen::Index>{2, 3});

  CHECK(part.locate(0.45) == 1);  // exactly at the interior edge -> right
  CHECK(part.locate(0.9) == 1);   // top edge stays in the last interval
  CHECK(part.locate(0.0) == 0);

  // All responses at the bottom edge land in the first interval.
  Eigen::VectorXd flat = Eigen::VectorXd::Zero(3);
  Eigen::MatrixXd x3 = Eigen::MatrixXd::Zero(3, 1);
  const auto all_low = sdr::assign_level_sets(sdr::make_dataset(x3, flat), part);
  CHECK(all_low.levels[0].size() == 3);
  CHECK(all_low.levels[1].empty());
}

TEST_CASE("assignment partitions every sample exactly once on random data") {
  sdr::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ds = sdr::testutil::random_dataset(rng, 60, 2);
    const int j = 1 + static_cast<int>(rng.uniform_index(10));
    const auto part = sdr::dyadic_partition(ds.y, j);
    const auto assign = sdr::assign_level_sets(ds, part);
    std::set<Eigen::Index> seen;
    for (int l = 0; l < assign.count(); ++l) {
      for (const auto idx : assign.levels[static_cast<std::size_t>(l)]) {
        CHECK(seen.insert(idx).second);  // disjoint
        const double v = ds.y(idx);
        CHECK(v >= part.edges[static_cast<std::size_t>(l)]);
        if (l + 1 < assign.count()) {
          CHECK(v < part.edges[static_cast<std::size_t>(l) + 1]);
        } else {
          CHECK(v <= part.edges.back());
        }
      }
    }
    CHECK(seen.size() == static_cast<std::size_t>(ds.n()));  // exhaustive
  }
}

TEST_CASE("split_train_test sizes and determinism") {
  sdr::Rng rng(9);
  const auto ds = sdr::testutil::random_dataset(rng, 100, 3);
  const auto [train, test] = sdr::split_train_test(ds, 0.15, 42);
  CHECK(test.n() == 15);
  CHECK(train.n() == 85);

  const auto [train2, test2] = sdr::split_train_test(ds, 0.15, 42);
  CHECK(train2.x == train.x);
  CHECK(test2.y == test.y);

  const auto ds3 = sdr::testutil::random_dataset(rng, 3, 2);
  const auto [tr3, te3] = sdr::split_train_test(ds3, 0.5, 1);
  CHECK(te3.n() == 2);  // ceiling rule
  CHECK(tr3.n() == 1);

  CHECK_THROWS_AS(sdr::split_train_test(ds, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sdr::split_train_test(ds, 1.0, 1), std::invalid_argument);
}

TEST_CASE("kfold_indices balanced partition and determinism") {
  const auto singletons = sdr::kfold_indices(10, 10, 7);
  REQUIRE(singletons.size() == 10);
  for (const auto& fold : singletons) CHECK(fold.size() == 1);

  const auto folds = sdr::kfold_indices(10, 3, 7);
  REQUIRE(folds.size() == 3);
  CHECK(folds[0].size() == 4);
  CHECK(folds[1].size() == 3);
  CHECK(folds[2].size() == 3);

  std::set<Eigen::Index> seen;
  for (const auto& fold : folds) {
    for (const auto idx : fold) CHECK(seen.insert(idx).second);
  }
  CHECK(seen.size() == 10);

  CHECK(sdr::kfold_indices(10, 3, 7) == folds);
  CHECK_THROWS_AS(sdr::kfold_indices(10, 1, 7), std::invalid_argument);
  CHECK_THROWS_AS(sdr::kfold_indices(10, 11, 7), std::invalid_argument);
}
