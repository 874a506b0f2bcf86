#pragma once

#include <string>
#include <vector>

#include "sdr/dataset.hpp"
#include "sdr/numkit.hpp"
#include "sdr/parallel.hpp"

namespace sdr {

enum class SdrMethod { rcls, sir, sir2, save, dr, phd };

std::string to_string(SdrMethod method);
SdrMethod method_from_string(const std::string& name);

namespace baselines {

using numkit::Matrix;
using numkit::Vector;

// Centered data mapped through the pseudo inverse square root of its sample
// covariance, so cov(Z) is the identity on the retained-rank subspace.
struct WhitenedData {
  Matrix z;         // N x D
  Matrix whitener;  // pseudo inverse square root of cov(X)
  Vector mean_x;
  int rank = 0;  // retained covariance rank
};

WhitenedData whiten(const Dataset& ds, double rtol = numkit::kDefaultRtol);

// First and second moments of one response slice, in whitened coordinates.
struct SliceMoments {
  Eigen::Index count = 0;
  double weight = 0.0;  // count / N
  Vector mean;
  Matrix cov;  // 1/n-normalized
  bool degenerate = true;
};

std::vector<SliceMoments> slice_moments(const Matrix& z, const LevelSetAssignment& assign,
                                        Exec exec = Exec::parallel);

// Method-specific candidate matrix in whitened coordinates. Slices with fewer
// than two samples are skipped; weight-averaged moments renormalize over the
// slices that remain. Throws when every slice is degenerate.
struct CandidateMatrix {
  SdrMethod method = SdrMethod::sir;
  Matrix lambda;
};

CandidateMatrix candidate_matrix(SdrMethod method, const WhitenedData& wd, const Vector& y,
                                 const LevelSetAssignment& assign, Exec exec = Exec::parallel);

// Slice-method candidate matrix from precomputed moments; lets a J-sweep
// share one moments pass across methods. Not defined for phd.
Matrix candidate_from_moments(SdrMethod method, const std::vector<SliceMoments>& moments,
                              Eigen::Index dim, Exec exec = Exec::parallel);

// phd candidate matrix, which needs no slicing.
Matrix phd_candidate(const Matrix& z, const Vector& y);

// Stable reorder by |eigenvalue| descending, for signed candidate spectra.
numkit::EigenDecomposition abs_sorted(const numkit::EigenDecomposition& eig);

}  // namespace baselines

// A fitted index-space estimate in original X coordinates, shared across all
// methods.
struct ProjectionEstimate {
  SdrMethod method = SdrMethod::rcls;
  int j = 0;
  int d_tilde = 0;
  double rtol = numkit::kDefaultRtol;
  numkit::Matrix basis;      // D x d_tilde, orthonormal
  numkit::Matrix projector;  // basis * basis^T
  numkit::EigenDecomposition spectrum;  // of the candidate matrix (|values| order for phd)
  bool rank_deficient = false;
};

// Table-style slice estimators. The candidate matrix is built in whitened
// coordinates, its leading directions (by |eigenvalue| for phd, by eigenvalue
// otherwise) are mapped back through the whitener and re-orthonormalized.
// `j` is ignored by phd.
ProjectionEstimate fit_sdr(const Dataset& ds, SdrMethod method, int j, int d_tilde,
                           double rtol = numkit::kDefaultRtol, Exec exec = Exec::parallel);

// Uniform entry point covering rcls as well as the slice baselines.
ProjectionEstimate fit_index_space(const Dataset& ds, SdrMethod method, int j, int d_tilde,
                                   double rtol = numkit::kDefaultRtol,
                                   Exec exec = Exec::parallel);

// Back-maps a candidate matrix in whitened coordinates to an X-space
// estimate: eigendecompose (ranking by |eigenvalue| for phd), push the top
// d_tilde directions through the whitener, re-orthonormalize.
ProjectionEstimate estimate_from_candidate(SdrMethod method, const numkit::Matrix& lambda,
                                           const baselines::WhitenedData& wd, int j, int d_tilde,
                                           double rtol);

}  // namespace sdr
