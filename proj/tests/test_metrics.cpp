#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sdr/metrics.hpp"
#include "sdr/numkit.hpp"
#include "test_util.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
namespace mt = sdr::metrics;

namespace {

MatrixXd line_projector(double a, double b) {
  Eigen::Vector2d v(a, b);
  v.normalize();
  return v * v.transpose();
}

}  // namespace

TEST_CASE("projection_error of identical projectors is zero") {
  sdr::Rng rng(2);
  const MatrixXd p = sdr::numkit::projector_from_basis(sdr::testutil::random_basis(rng, 5, 2));
  const auto err = mt::projection_error(p, p);
  CHECK(err.frobenius <= 1e-12);
  CHECK(err.spectral <= 1e-12);
  CHECK(err.largest_principal_angle <= 1e-6);
}

TEST_CASE("projection_error of orthogonal lines") {
  const MatrixXd p1 = line_projector(1, 0);
  const MatrixXd p2 = line_projector(0, 1);
  const auto err = mt::projection_error(p1, p2);
  CHECK(err.frobenius == doctest::Approx(std::sqrt(2.0)));
  CHECK(err.spectral == doctest::Approx(1.0));
  CHECK(err.largest_principal_angle == doctest::Approx(std::acos(0.0)));  // pi/2
}

TEST_CASE("projection_error of lines at 45 degrees") {
  // Entrywise difference of e1e1^T and the diagonal-line projector has four
  // entries of magnitude 1/2.
  const auto err = mt::projection_error(line_projector(1, 1), line_projector(1, 0));
  CHECK(err.frobenius == doctest::Approx(1.0));
}

TEST_CASE("projection_error validates projector inputs") {
  MatrixXd not_proj(2, 2);
  not_proj << 1, 0, 0, 2;
  CHECK_THROWS_AS(mt::projection_error(not_proj, MatrixXd::Identity(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("both norm routes agree on random equal-rank pairs") {
  sdr::Rng rng(21);
  const Eigen::Index dim = 20;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.uniform_index(6));
    const MatrixXd pa =
        sdr::numkit::projector_from_basis(sdr::testutil::random_basis(rng, dim, m));
    const MatrixXd pb =
        sdr::numkit::projector_from_basis(sdr::testutil::random_basis(rng, dim, m));
    const auto err = mt::projection_error(pa, pb);
    CHECK(err.ranks_match);
    CHECK(err.frobenius_identity_gap <= 1e-10);
    // Direct spectral-route check: ||P_a - P_b|| equals the largest singular
    // value of (I - P_a) P_b.
    const MatrixXd comp = (MatrixXd::Identity(dim, dim) - pa) * pb;
    const Eigen::JacobiSVD<MatrixXd> svd(comp);
    CHECK(std::abs(err.spectral - svd.singularValues()(0)) <= 1e-10);
    // The two arguments play symmetric roles.
    const auto flipped = mt::projection_error(pb, pa);
    CHECK(flipped.frobenius == doctest::Approx(err.frobenius).epsilon(1e-12));
    CHECK(std::abs(flipped.spectral - err.spectral) <= 1e-10);
    // Frobenius is controlled by rank times spectral.
    CHECK(err.frobenius <=
          std::sqrt(2.0 * static_cast<double>(m)) * err.spectral + 1e-10);
  }
}

TEST_CASE("unequal ranks are tolerated but flagged") {
  sdr::Rng rng(23);
  const MatrixXd pa = sdr::numkit::projector_from_basis(sdr::testutil::random_basis(rng, 6, 2));
  const MatrixXd pb = sdr::numkit::projector_from_basis(sdr::testutil::random_basis(rng, 6, 3));
  const auto err = mt::projection_error(pa, pb);
  CHECK_FALSE(err.ranks_match);
  CHECK(err.frobenius > 0.0);
}

TEST_CASE("rmse") {
  VectorXd a(2), b(2);
  a << 1, 2;
  b << 1, 2;
  CHECK(mt::rmse(a, b) == 0.0);
  b << 2, 3;
  CHECK(mt::rmse(a, b) == doctest::Approx(1.0));
  a << 0, 0;
  b << 3, 4;
  CHECK(mt::rmse(a, b) == doctest::Approx(std::sqrt(12.5)));
  VectorXd c(3);
  CHECK_THROWS_AS(mt::rmse(a, c), std::invalid_argument);
}

TEST_CASE("loglog_slope") {
  std::vector<double> ns{100, 400, 1600, 6400};
  std::vector<double> errs;
  for (const double n : ns) errs.push_back(3.0 / std::sqrt(n));
  CHECK(mt::loglog_slope(ns, errs) == doctest::Approx(-0.5).epsilon(1e-10));

  std::vector<double> flat{2.0, 2.0, 2.0, 2.0};
  CHECK(mt::loglog_slope(ns, flat) == doctest::Approx(0.0));

  CHECK(mt::loglog_slope({1, 4}, {1, 0.25}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(mt::loglog_slope({1, 4}, {1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(mt::loglog_slope({1}, {1}), std::invalid_argument);
}

TEST_CASE("spearman rank correlation") {
  CHECK(mt::spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(mt::spearman({1, 2, 3, 4}, {9, 7, 5, 3}) == doctest::Approx(-1.0));
  // Monotone in ranks even when nonlinear in values.
  CHECK(mt::spearman({1, 2, 3, 4}, {1, 8, 27, 64}) == doctest::Approx(1.0));
  CHECK(mt::spearman({1, 1, 1}, {1, 2, 3}) == doctest::Approx(0.0));
}
