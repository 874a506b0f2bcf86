#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// The OpenMP kernels must reproduce the serial reference paths bit for bit:
// every parallel iteration owns its output slot and reductions merge in a
// fixed order.

#include "sdr/baselines.hpp"
#include "sdr/experiments.hpp"
#include "sdr/knn.hpp"
#include "sdr/piecewise_poly.hpp"
#include "sdr/proxy.hpp"
#include "sdr/rcls.hpp"
#include "sdr/synthetic.hpp"
#include "test_util.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using sdr::Exec;

TEST_CASE("level-set statistics match bit for bit") {
  sdr::Rng rng(2);
  const auto ds = sdr::testutil::random_dataset(rng, 500, 6);
  const auto assign = sdr::assign_level_sets(ds, sdr::dyadic_partition(ds.y, 9));
  const auto serial = sdr::rcls::level_set_stats(ds, assign, 1e-10, Exec::serial);
  const auto parallel = sdr::rcls::level_set_stats(ds, assign, 1e-10, Exec::parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t l = 0; l < serial.size(); ++l) {
    CHECK(serial[l].count == parallel[l].count);
    CHECK(serial[l].cov_x == parallel[l].cov_x);
    CHECK(serial[l].ols == parallel[l].ols);
  }
  CHECK(sdr::rcls::rcls_matrix_from_stats(serial) ==
        sdr::rcls::rcls_matrix_from_stats(parallel));
}

TEST_CASE("slice moments and candidate matrices match bit for bit") {
  sdr::Rng rng(3);
  const auto ds = sdr::testutil::random_dataset(rng, 400, 5);
  const auto wd = sdr::baselines::whiten(ds);
  const auto assign = sdr::assign_level_sets(ds, sdr::dyadic_partition(ds.y, 7));
  const auto ms = sdr::baselines::slice_moments(wd.z, assign, Exec::serial);
  const auto mp = sdr::baselines::slice_moments(wd.z, assign, Exec::parallel);
  REQUIRE(ms.size() == mp.size());
  for (std::size_t l = 0; l < ms.size(); ++l) {
    CHECK(ms[l].mean == mp[l].mean);
    CHECK(ms[l].cov == mp[l].cov);
  }
  for (const auto method : {sdr::SdrMethod::sir, sdr::SdrMethod::sir2, sdr::SdrMethod::save,
                            sdr::SdrMethod::dr}) {
    CHECK(sdr::baselines::candidate_from_moments(method, ms, 5, Exec::serial) ==
          sdr::baselines::candidate_from_moments(method, mp, 5, Exec::parallel));
  }
}

TEST_CASE("knn batch predictions match bit for bit") {
  sdr::Rng rng(5);
  const MatrixXd x = sdr::testutil::random_gaussian(rng, 300, 4);
  VectorXd y(300);
  for (Eigen::Index i = 0; i < 300; ++i) y(i) = rng.normal();
  const MatrixXd p =
      sdr::numkit::projector_from_basis(sdr::testutil::random_basis(rng, 4, 2));
  const auto model = sdr::regress::make_knn_model(x, y, p, 7);
  const MatrixXd queries = sdr::testutil::random_gaussian(rng, 64, 4);
  CHECK(sdr::regress::knn_predict_batch(model, queries, Exec::serial) ==
        sdr::regress::knn_predict_batch(model, queries, Exec::parallel));
}

TEST_CASE("piecewise fits match bit for bit") {
  sdr::Rng rng(7);
  const Eigen::Index n = 400;
  MatrixXd x = sdr::testutil::random_gaussian(rng, n, 4) * 0.3;
  VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = rng.normal();
  const MatrixXd basis = sdr::testutil::random_basis(rng, 4, 2);
  const sdr::Dataset ds = sdr::make_dataset(x, y);
  const auto serial =
      sdr::regress::piecewise_poly_fit(ds, basis, 2, 1, 2.0, {-2.0, 2.0}, Exec::serial);
  const auto parallel =
      sdr::regress::piecewise_poly_fit(ds, basis, 2, 1, 2.0, {-2.0, 2.0}, Exec::parallel);
  REQUIRE(serial.cells.size() == parallel.cells.size());
  auto it_s = serial.cells.begin();
  auto it_p = parallel.cells.begin();
  for (; it_s != serial.cells.end(); ++it_s, ++it_p) {
    CHECK(it_s->first.coords == it_p->first.coords);
    CHECK(it_s->second == it_p->second);
  }
}

TEST_CASE("proxy scans match bit for bit") {
  sdr::harness::SyntheticSpec spec;
  spec.link = sdr::harness::LinkId::b;
  spec.dim_ambient = 4;
  spec.n = 1500;
  spec.seed = 11;
  const auto data = sdr::harness::synth_dataset(spec);
  const std::vector<int> grid{2, 3, 4, 5, 6};
  const auto serial = sdr::proxy::proxy_scan(data.data, grid, 2, 1e-10, Exec::serial);
  const auto parallel = sdr::proxy::proxy_scan(data.data, grid, 2, 1e-10, Exec::parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].proxy_value == parallel[i].proxy_value);
    CHECK(serial[i].proxy_value_logfactor == parallel[i].proxy_value_logfactor);
    CHECK(serial[i].gamma_hat == parallel[i].gamma_hat);
  }
}

TEST_CASE("experiment drivers match bit for bit across execution policies") {
  sdr::harness::RateConfig config;
  config.methods = {sdr::SdrMethod::rcls, sdr::SdrMethod::sir};
  config.links = {sdr::harness::LinkId::a};
  config.n_grid = {300, 600};
  config.j_grid = {2, 4};
  config.dim_ambient = 5;
  config.repetitions = 4;
  config.seed = 13;
  config.exec = Exec::serial;
  const auto serial = sdr::harness::run_rate_experiment(config);
  config.exec = Exec::parallel;
  const auto parallel = sdr::harness::run_rate_experiment(config);
  CHECK(serial.runs.to_csv() == parallel.runs.to_csv());
  CHECK(serial.summary.to_csv() == parallel.summary.to_csv());
}
