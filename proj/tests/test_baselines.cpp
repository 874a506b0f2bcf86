#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sdr/baselines.hpp"
#include "sdr/metrics.hpp"
#include "sdr/synthetic.hpp"
#include "test_util.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using sdr::SdrMethod;
namespace bl = sdr::baselines;

TEST_CASE("method names round-trip") {
  for (const auto m : {SdrMethod::rcls, SdrMethod::sir, SdrMethod::sir2, SdrMethod::save,
                       SdrMethod::dr, SdrMethod::phd}) {
    CHECK(sdr::method_from_string(sdr::to_string(m)) == m);
  }
  CHECK_THROWS_AS(sdr::method_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("whiten keeps a rank-one sample on its retained subspace") {
  MatrixXd x(2, 2);
  x << 1, 0, -1, 0;
  VectorXd y(2);
  y << 0, 1;
  const auto wd = bl::whiten(sdr::make_dataset(x, y));
  CHECK(wd.rank == 1);
  CHECK(wd.z(0, 0) == doctest::Approx(1.0));
  CHECK(wd.z(1, 0) == doctest::Approx(-1.0));
  CHECK(std::abs(wd.z(0, 1)) <= 1e-12);
}

TEST_CASE("already-white data passes through centered") {
  const double s = std::sqrt(2.0);
  MatrixXd x(4, 2);
  x << s, 0, -s, 0, 0, s, 0, -s;  // sample covariance is the identity
  VectorXd y(4);
  y << 0, 1, 2, 3;
  const auto wd = bl::whiten(sdr::make_dataset(x, y));
  CHECK((wd.z - x).norm() <= 1e-10);
}

TEST_CASE("whitened covariance is the identity on full-rank data") {
  sdr::Rng rng(3);
  const auto ds = sdr::testutil::random_dataset(rng, 500, 6);
  const auto wd = bl::whiten(ds);
  const MatrixXd cov = (wd.z.transpose() * wd.z) / static_cast<double>(ds.n());
  CHECK((cov - MatrixXd::Identity(6, 6)).norm() <= 1e-6);
}

TEST_CASE("whiten rejects a zero covariance") {
  MatrixXd x = MatrixXd::Ones(3, 2);
  VectorXd y(3);
  y << 1, 2, 3;
  CHECK_THROWS(bl::whiten(sdr::make_dataset(x, y)));
}

namespace {

bl::SliceMoments make_moments(const VectorXd& mean, const MatrixXd& cov, double weight) {
  bl::SliceMoments m;
  m.count = 10;
  m.weight = weight;
  m.mean = mean;
  m.cov = cov;
  m.degenerate = false;
  return m;
}

}  // namespace

TEST_CASE("sir candidate of two symmetric slices is the mean outer product") {
  VectorXd m(2);
  m << 0.6, -0.8;
  const std::vector<bl::SliceMoments> moments{
      make_moments(m, MatrixXd::Identity(2, 2), 0.5),
      make_moments(-m, MatrixXd::Identity(2, 2), 0.5)};
  const MatrixXd lambda = bl::candidate_from_moments(SdrMethod::sir, moments, 2);
  CHECK((lambda - m * m.transpose()).norm() <= 1e-12);
}

TEST_CASE("save candidate vanishes when every slice covariance is the identity") {
  const std::vector<bl::SliceMoments> moments{
      make_moments(VectorXd::Zero(3), MatrixXd::Identity(3, 3), 0.5),
      make_moments(VectorXd::Ones(3), MatrixXd::Identity(3, 3), 0.5)};
  CHECK(bl::candidate_from_moments(SdrMethod::save, moments, 3).norm() <= 1e-14);
}

TEST_CASE("dr pair formula matches a brute-force double expectation") {
  // Empirical cov of Z - Z' over all cross pairs of two slices equals
  // V_i + V_j plus the outer product of the mean difference; the candidate
  // built from moments must match the one built by enumerating pairs.
  sdr::Rng rng(7);
  const Eigen::Index dim = 3;
  const MatrixXd za = sdr::testutil::random_gaussian(rng, 9, dim);
  const MatrixXd zb = sdr::testutil::random_gaussian(rng, 7, dim);

  auto moments_of = [](const MatrixXd& z, double weight) {
    bl::SliceMoments m;
    m.count = z.rows();
    m.weight = weight;
    m.mean = z.colwise().mean();
    const MatrixXd zc = z.rowwise() - m.mean.transpose();
    m.cov = (zc.transpose() * zc) / static_cast<double>(z.rows());
    m.cov = ((m.cov + m.cov.transpose()) / 2.0).eval();
    m.degenerate = false;
    return m;
  };
  const double wa = 9.0 / 16.0, wb = 7.0 / 16.0;
  const std::vector<bl::SliceMoments> moments{moments_of(za, wa), moments_of(zb, wb)};
  const MatrixXd lambda = bl::candidate_from_moments(SdrMethod::dr, moments, dim);

  // Brute force: the pair kernel is the raw second moment of Z - Z' over all
  // cross pairs of two slices, enumerated directly.
  auto pair_second_moment = [&](const MatrixXd& zi, const MatrixXd& zj) {
    MatrixXd acc = MatrixXd::Zero(dim, dim);
    for (Eigen::Index a = 0; a < zi.rows(); ++a) {
      for (Eigen::Index b = 0; b < zj.rows(); ++b) {
        const VectorXd diff = (zi.row(a) - zj.row(b)).transpose();
        acc += diff * diff.transpose();
      }
    }
    return (acc / static_cast<double>(zi.rows() * zj.rows())).eval();
  };
  const MatrixXd id2 = 2.0 * MatrixXd::Identity(dim, dim);
  MatrixXd brute = MatrixXd::Zero(dim, dim);
  const MatrixXd slices[2] = {za, zb};
  const double weights[2] = {wa, wb};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const MatrixXd dev = id2 - pair_second_moment(slices[i], slices[j]);
      brute += weights[i] * weights[j] * (dev * dev);
    }
  }
  CHECK((lambda - brute).norm() <= 1e-10);
}

TEST_CASE("phd finds the quadratic direction on normal data") {
  // Monte Carlo oracle: for responses (e1 . X)^2 under standard normal X the
  // averaged Hessian candidate converges to 2 e1 e1^T.
  sdr::Rng rng(11);
  const Eigen::Index n = 100000, dim = 5;
  MatrixXd x = sdr::testutil::random_gaussian(rng, n, dim);
  VectorXd y = x.col(0).array().square();
  const auto est = sdr::fit_sdr(sdr::make_dataset(std::move(x), std::move(y)), SdrMethod::phd,
                                0, 1);
  const double cosine = std::abs(est.basis.col(0)(0)) / est.basis.col(0).norm();
  const double angle_deg = std::acos(std::min(1.0, cosine)) * 180.0 / M_PI;
  CHECK(angle_deg < 10.0);
}

TEST_CASE("slice candidates are positive semidefinite on random data") {
  sdr::Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ds = sdr::testutil::random_dataset(rng, 200, 4);
    const auto wd = bl::whiten(ds);
    const auto assign = sdr::assign_level_sets(ds, sdr::dyadic_partition(ds.y, 5));
    const auto moments = bl::slice_moments(wd.z, assign);
    for (const auto method :
         {SdrMethod::sir, SdrMethod::sir2, SdrMethod::save, SdrMethod::dr}) {
      const MatrixXd lambda = bl::candidate_from_moments(method, moments, 4);
      const auto eig = sdr::numkit::sym_eig(lambda);
      CHECK(eig.eigenvalues.minCoeff() >= -1e-8 * std::max(eig.eigenvalues(0), 0.0));
    }
  }
}

TEST_CASE("slice weights cover the sample when no slice is empty") {
  sdr::Rng rng(17);
  const auto ds = sdr::testutil::random_dataset(rng, 300, 3);
  const auto wd = bl::whiten(ds);
  const auto assign = sdr::assign_level_sets(ds, sdr::dyadic_partition(ds.y, 4));
  const auto moments = bl::slice_moments(wd.z, assign);
  double total = 0.0;
  bool any_empty = false;
  for (const auto& m : moments) {
    total += m.weight;
    any_empty = any_empty || m.count == 0;
  }
  CHECK_FALSE(any_empty);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sir projector is equivariant under invertible reparameterization") {
  sdr::harness::SyntheticSpec spec;
  spec.link = sdr::harness::LinkId::a;
  spec.dim_ambient = 6;
  spec.n = 5000;
  spec.noise_ratio = 0.01;
  spec.seed = 23;
  const auto data = sdr::harness::synth_dataset(spec);
  const auto base = sdr::fit_sdr(data.data, SdrMethod::sir, 8, 2);

  sdr::Rng rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    MatrixXd t = sdr::testutil::random_gaussian(rng, 6, 6);
    t += 6.0 * MatrixXd::Identity(6, 6);  // keep it well-conditioned
    sdr::Dataset mapped = data.data;
    mapped.x = data.data.x * t.transpose();
    const auto est = sdr::fit_sdr(mapped, SdrMethod::sir, 8, 2);
    // Directions transform through the inverse transpose.
    const MatrixXd expected_basis = t.transpose().inverse() * base.basis;
    const MatrixXd expected =
        sdr::numkit::projector_from_basis(sdr::numkit::orthonormalize(expected_basis));
    CHECK((est.projector - expected).norm() <= 1e-6);
  }
}

TEST_CASE("degenerate slices are skipped, fully degenerate fits fail") {
  MatrixXd x(3, 2);
  x << 0, 0, 1, 1, 2, 2;
  VectorXd y(3);
  y << 0, 1, 2;
  // J = 3 gives one sample per slice: nothing usable.
  CHECK_THROWS_AS(sdr::fit_sdr(sdr::make_dataset(x, y), SdrMethod::sir, 3, 1),
                  std::runtime_error);
}

TEST_CASE("fit_index_space covers rcls and baselines uniformly") {
  sdr::harness::SyntheticSpec spec;
  spec.link = sdr::harness::LinkId::a;
  spec.dim_ambient = 6;
  spec.n = 2000;
  spec.seed = 31;
  const auto data = sdr::harness::synth_dataset(spec);
  for (const auto m : {SdrMethod::rcls, SdrMethod::sir, SdrMethod::sir2, SdrMethod::save,
                       SdrMethod::dr, SdrMethod::phd}) {
    const auto est = sdr::fit_index_space(data.data, m, 6, 2);
    CHECK(est.method == m);
    CHECK(est.projector.rows() == 6);
    CHECK(est.basis.cols() == 2);
    CHECK((est.projector * est.projector - est.projector).norm() <= 1e-8);
    CHECK(est.projector.trace() == doctest::Approx(2.0).epsilon(1e-8));
  }
}
