#pragma once

#include <Eigen/Dense>

namespace sdr::numkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Relative eigenvalue cutoff used by the pseudoinverse family when the caller
// does not specify one; matches double-precision conditioning.
inline constexpr double kDefaultRtol = 1e-10;

struct EigenDecomposition {
  Vector eigenvalues;   // sorted descending
  Matrix eigenvectors;  // orthonormal columns, same order as eigenvalues
};

// Throws std::invalid_argument unless S is square, finite, and symmetric to
// within 1e-12 relative tolerance.
void check_symmetric(const Matrix& s);

// Spectral factorization of a symmetric matrix. Eigenvalues come out in
// descending order; each eigenvector is normalized so that its first
// component of non-negligible magnitude is positive, making repeated runs
// produce identical output.
EigenDecomposition sym_eig(const Matrix& s);

// Moore-Penrose pseudoinverse of a symmetric PSD matrix. Eigenvalues at or
// below rtol * lambda_max are treated as zero; an eigenvalue below
// -rtol * lambda_max is rejected as a non-PSD input.
Matrix pinv_psd(const Matrix& s, double rtol = kDefaultRtol);

// Pseudo inverse square root (same cutoff rule as pinv_psd): eigenvalues
// above the threshold map to 1/sqrt(lambda), the rest to zero.
Matrix pinv_sqrt_psd(const Matrix& s, double rtol = kDefaultRtol);

// Orthoprojector B * B^T of an orthonormal basis B (D x m). Rejects input
// with ||B^T B - I||_F > 1e-8.
Matrix projector_from_basis(const Matrix& basis);

// Orthonormal basis spanning the columns of B (thin QR with the same sign
// convention as sym_eig). B must have full column rank up to roundoff; the
// output always has as many columns as B.
Matrix orthonormalize(const Matrix& b);

// Spectral norm (largest absolute eigenvalue) of a symmetric matrix.
double spectral_norm_sym(const Matrix& s);

}  // namespace sdr::numkit
