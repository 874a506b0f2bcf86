#pragma once

#include <vector>

#include "sdr/dataset.hpp"
#include "sdr/numkit.hpp"
#include "sdr/parallel.hpp"

namespace sdr::rcls {

using numkit::Matrix;
using numkit::Vector;

// Ordinary least squares slope of Y against centered X, computed through the
// tolerance pseudoinverse of the 1/n-normalized second-moment matrix. With
// fewer than two samples the slope is zero and the result is flagged
// degenerate instead of failing, so hyperparameter sweeps always complete.
struct OlsResult {
  Vector slope;
  bool degenerate = false;
};
OlsResult conditional_ols(const Matrix& xs, const Vector& ys, double rtol = numkit::kDefaultRtol);

// Moments and regression slope of one level set.
struct LevelSetStats {
  Eigen::Index count = 0;
  double weight = 0.0;  // count / N
  Vector mean_x;
  double mean_y = 0.0;
  double var_y = 0.0;  // 1/n-normalized
  Matrix cov_x;        // 1/n-normalized second-moment matrix
  Vector cov_xy;
  Vector ols;  // zero when degenerate
  bool degenerate = true;
};

// Per-level statistics for an assignment; independent across levels, so the
// parallel path distributes levels over threads and matches the serial
// reference bit for bit.
std::vector<LevelSetStats> level_set_stats(const Dataset& ds, const LevelSetAssignment& assign,
                                           double rtol = numkit::kDefaultRtol,
                                           Exec exec = Exec::parallel);

// Weighted outer-product matrix of the per-level slopes. Levels with fewer
// than two samples contribute nothing; if every level is degenerate this
// throws.
Matrix rcls_matrix_from_stats(const std::vector<LevelSetStats>& stats);

std::pair<Matrix, std::vector<LevelSetStats>> rcls_matrix(const Dataset& ds, int j,
                                                          double rtol = numkit::kDefaultRtol,
                                                          Exec exec = Exec::parallel);

// Fitted index-space estimate.
struct RclsModel {
  int j = 0;
  int d_tilde = 0;
  double rtol = numkit::kDefaultRtol;
  Matrix m_matrix;  // weighted slope outer-product matrix
  numkit::EigenDecomposition spectrum;
  Matrix basis;      // D x d_tilde, orthonormal
  Matrix projector;  // basis * basis^T
  std::vector<LevelSetStats> per_level;
  ResponsePartition partition;
  // Set when the d_tilde-th eigenvalue is at numerical zero; the fit still
  // returns a d_tilde-dimensional projector.
  bool rank_deficient = false;
};

RclsModel rcls_projector(const Dataset& ds, int j, int d_tilde,
                         double rtol = numkit::kDefaultRtol, Exec exec = Exec::parallel);

// Same fit against a caller-supplied partition/assignment (any interval
// decomposition works, not just the equal-width one).
RclsModel rcls_projector_with_assignment(const Dataset& ds, const ResponsePartition& part,
                                         const LevelSetAssignment& assign, int d_tilde,
                                         double rtol = numkit::kDefaultRtol,
                                         Exec exec = Exec::parallel);

// Largest-spectral-gap heuristic for choosing the index dimension: the i
// maximizing eigenvalue(i)/eigenvalue(i+1), ties to the smaller i. Returns 0
// when the whole spectrum sits at numerical zero.
int suggest_dim(const numkit::EigenDecomposition& spectrum);

}  // namespace sdr::rcls
