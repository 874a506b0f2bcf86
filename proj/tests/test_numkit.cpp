#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>

#include "sdr/numkit.hpp"
#include "test_util.hpp"

using sdr::numkit::Matrix;
using sdr::numkit::Vector;
namespace nk = sdr::numkit;

TEST_CASE("sym_eig identity") {
  const auto eig = nk::sym_eig(Matrix::Identity(2, 2));
  CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("sym_eig diagonal matrix sorts descending with axis eigenvectors") {
  Matrix s(2, 2);
  s << 3, 0, 0, 1;
  const auto eig = nk::sym_eig(s);
  CHECK(eig.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
  CHECK(std::abs(eig.eigenvectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(eig.eigenvectors(1, 1)) == doctest::Approx(1.0));
  CHECK(eig.eigenvectors(0, 0) > 0);  // sign convention
  CHECK(eig.eigenvectors(1, 1) > 0);
}

TEST_CASE("sym_eig 2x2 with off-diagonal coupling") {
  // Characteristic polynomial of [[2,1],[1,2]] gives 3 and 1 with
  // eigenvectors (1,1)/sqrt(2) and (1,-1)/sqrt(2).
  Matrix s(2, 2);
  s << 2, 1, 1, 2;
  const auto eig = nk::sym_eig(s);
  CHECK(eig.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(eig.eigenvectors(0, 0) == doctest::Approx(inv_sqrt2));
  CHECK(eig.eigenvectors(1, 0) == doctest::Approx(inv_sqrt2));
  CHECK(eig.eigenvectors(0, 1) == doctest::Approx(inv_sqrt2));
  CHECK(eig.eigenvectors(1, 1) == doctest::Approx(-inv_sqrt2));
}

TEST_CASE("sym_eig rejects bad input") {
  Matrix asym(2, 2);
  asym << 1, 2, 3, 4;
  CHECK_THROWS_AS(nk::sym_eig(asym), std::invalid_argument);
  Matrix inf(2, 2);
  inf << 1, 0, 0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(nk::sym_eig(inf), std::invalid_argument);
}

TEST_CASE("sym_eig reconstruction and orthonormality on random matrices") {
  sdr::Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.uniform_index(10));
    const Matrix s = sdr::testutil::random_symmetric(rng, dim);
    const auto eig = nk::sym_eig(s);
    const Matrix rebuilt =
        eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.transpose();
    CHECK((s - rebuilt).norm() <= 1e-8 * (1.0 + s.norm()));
    CHECK((eig.eigenvectors.transpose() * eig.eigenvectors - Matrix::Identity(dim, dim)).norm() <=
          1e-10);
    for (Eigen::Index i = 0; i + 1 < dim; ++i) {
      CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i + 1));
    }
  }
}

TEST_CASE("pinv_psd identity and rank-deficient diagonal") {
  CHECK((nk::pinv_psd(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() <= 1e-12);
  Matrix s(2, 2);
  s << 2, 0, 0, 0;
  Matrix expected(2, 2);
  expected << 0.5, 0, 0, 0;
  CHECK((nk::pinv_psd(s) - expected).norm() <= 1e-12);
}

TEST_CASE("pinv_psd applies the relative eigenvalue cutoff") {
  Matrix s(2, 2);
  s << 1, 0, 0, 1e-14;
  Matrix expected(2, 2);
  expected << 1, 0, 0, 0;
  CHECK((nk::pinv_psd(s, 1e-10) - expected).norm() <= 1e-12);
}

TEST_CASE("pinv_psd rejects clearly negative eigenvalues and bad rtol") {
  Matrix s(2, 2);
  s << 1, 0, 0, -0.5;
  CHECK_THROWS_AS(nk::pinv_psd(s), std::invalid_argument);
  CHECK_THROWS_AS(nk::pinv_psd(Matrix::Identity(2, 2), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(nk::pinv_psd(Matrix::Identity(2, 2), 1.0), std::invalid_argument);
}

TEST_CASE("pinv_psd satisfies the Moore-Penrose identities on retained spectra") {
  sdr::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.uniform_index(8));
    // Eigenvalues well above the cutoff so nothing is truncated.
    const Matrix basis = sdr::testutil::random_orthogonal(rng, dim);
    Vector vals(dim);
    for (Eigen::Index i = 0; i < dim; ++i) vals(i) = rng.uniform(0.1, 2.0);
    const Matrix s = basis * vals.asDiagonal() * basis.transpose();
    const Matrix sym = ((s + s.transpose()) / 2.0).eval();
    const Matrix pinv = nk::pinv_psd(sym);
    CHECK((sym * pinv * sym - sym).norm() <= 1e-8 * (1.0 + sym.norm()));
    CHECK((pinv * sym * pinv - pinv).norm() <= 1e-8 * (1.0 + pinv.norm()));
  }
}

TEST_CASE("projector_from_basis on coordinate and hand-built bases") {
  Matrix e1 = Matrix::Zero(2, 1);
  e1(0, 0) = 1;
  Matrix expected1 = Matrix::Zero(2, 2);
  expected1(0, 0) = 1;
  CHECK((nk::projector_from_basis(e1) - expected1).norm() <= 1e-14);

  Matrix e12 = Matrix::Identity(3, 3).leftCols(2);
  Matrix expected2 = Matrix::Zero(3, 3);
  expected2(0, 0) = expected2(1, 1) = 1;
  CHECK((nk::projector_from_basis(e12) - expected2).norm() <= 1e-14);

  Matrix diag(2, 1);
  diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Matrix expected3(2, 2);
  expected3 << 0.5, 0.5, 0.5, 0.5;
  CHECK((nk::projector_from_basis(diag) - expected3).norm() <= 1e-12);
}

TEST_CASE("projector_from_basis rejects non-orthonormal columns") {
  Matrix b(2, 1);
  b << 1, 1;
  CHECK_THROWS_AS(nk::projector_from_basis(b), std::invalid_argument);
}

TEST_CASE("projectors are symmetric idempotent with integer trace") {
  sdr::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.uniform_index(10));
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(dim)));
    const Matrix p = nk::projector_from_basis(sdr::testutil::random_basis(rng, dim, m));
    CHECK((p * p - p).norm() <= 1e-10);
    CHECK((p - p.transpose()).norm() <= 1e-10);
    CHECK(p.trace() == doctest::Approx(static_cast<double>(m)).epsilon(1e-8));
  }
}

TEST_CASE("orthonormalize spans the input column space") {
  sdr::Rng rng(17);
  const Matrix b = sdr::testutil::random_gaussian(rng, 6, 3);
  const Matrix q = nk::orthonormalize(b);
  CHECK((q.transpose() * q - Matrix::Identity(3, 3)).norm() <= 1e-12);
  // Same span: projecting b onto the q-space loses nothing.
  CHECK((q * (q.transpose() * b) - b).norm() <= 1e-10 * (1.0 + b.norm()));
}

TEST_CASE("spectral_norm_sym picks the largest magnitude eigenvalue") {
  Matrix s(2, 2);
  s << -3, 0, 0, 2;
  CHECK(nk::spectral_norm_sym(s) == doctest::Approx(3.0));
}
