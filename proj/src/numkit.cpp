#include "sdr/numkit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdr::numkit {

namespace {

void fix_column_signs(Matrix& u) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    auto col = u.col(c);
    const double cutoff = 1e-12 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (std::abs(col(r)) > cutoff) {
        if (col(r) < 0) col = -col;
        break;
      }
    }
  }
}

// Shared eigenvalue-filtered rebuild for the pseudoinverse variants.
Matrix rebuild_filtered(const Matrix& s, double rtol, double (*transform)(double)) {
  if (!(rtol > 0.0 && rtol < 1.0)) {
    throw std::invalid_argument("pinv_psd: rtol must lie in (0,1)");
  }
  const EigenDecomposition eig = sym_eig(s);
  const double lambda_max = eig.eigenvalues.size() > 0 ? std::max(eig.eigenvalues(0), 0.0) : 0.0;
  const double cut = rtol * lambda_max;
  if (eig.eigenvalues.size() > 0 && eig.eigenvalues.minCoeff() < -cut) {
    throw std::invalid_argument(
        "pinv_psd: matrix has negative eigenvalue " +
        std::to_string(eig.eigenvalues.minCoeff()) + " below -rtol*lambda_max");
  }
  Vector inv = Vector::Zero(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    if (eig.eigenvalues(i) > cut) inv(i) = transform(eig.eigenvalues(i));
  }
  Matrix out = eig.eigenvectors * inv.asDiagonal() * eig.eigenvectors.transpose();
  return ((out + out.transpose()) / 2.0).eval();
}

}  // namespace

void check_symmetric(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() < 1) {
    throw std::invalid_argument("symmetric matrix expected, got " +
                                std::to_string(s.rows()) + "x" + std::to_string(s.cols()));
  }
  if (!s.allFinite()) {
    throw std::invalid_argument("matrix has non-finite entries");
  }
  const double asym = (s - s.transpose()).norm();
  if (asym > 1e-12 * (1.0 + s.norm())) {
    throw std::invalid_argument("matrix is not symmetric (||S - S^T||_F = " +
                                std::to_string(asym) + ")");
  }
}

EigenDecomposition sym_eig(const Matrix& s) {
  check_symmetric(s);
  const Matrix sym = (s + s.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("sym_eig: eigendecomposition failed to converge");
  }
  EigenDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  fix_column_signs(out.eigenvectors);
  return out;
}

Matrix pinv_psd(const Matrix& s, double rtol) {
  return rebuild_filtered(s, rtol, [](double x) { return 1.0 / x; });
}

Matrix pinv_sqrt_psd(const Matrix& s, double rtol) {
  return rebuild_filtered(s, rtol, [](double x) { return 1.0 / std::sqrt(x); });
}

Matrix projector_from_basis(const Matrix& basis) {
  if (basis.rows() < 1 || basis.cols() < 1 || basis.cols() > basis.rows()) {
    throw std::invalid_argument("projector_from_basis: basis must be D x m with 1 <= m <= D");
  }
  const Matrix gram = basis.transpose() * basis;
  const double gap = (gram - Matrix::Identity(basis.cols(), basis.cols())).norm();
  if (gap > 1e-8) {
    throw std::invalid_argument("projector_from_basis: columns not orthonormal (||B^T B - I||_F = " +
                                std::to_string(gap) + ")");
  }
  Matrix p = basis * basis.transpose();
  return ((p + p.transpose()) / 2.0).eval();
}

Matrix orthonormalize(const Matrix& b) {
  if (b.rows() < 1 || b.cols() < 1 || b.cols() > b.rows()) {
    throw std::invalid_argument("orthonormalize: input must be D x m with 1 <= m <= D");
  }
  if (!b.allFinite()) {
    throw std::invalid_argument("orthonormalize: non-finite entries");
  }
  Eigen::HouseholderQR<Matrix> qr(b);
  Matrix q = qr.householderQ() * Matrix::Identity(b.rows(), b.cols());
  fix_column_signs(q);
  return q;
}

double spectral_norm_sym(const Matrix& s) {
  const EigenDecomposition eig = sym_eig(s);
  return eig.eigenvalues.cwiseAbs().maxCoeff();
}

}  // namespace sdr::numkit
