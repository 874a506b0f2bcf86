#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sdr::metrics {

// Distances between the ranges of two orthoprojectors.
struct SubspaceError {
  double frobenius = 0.0;                // ||P_hat - P||_F
  double spectral = 0.0;                 // ||P_hat - P||_2
  double largest_principal_angle = 0.0;  // radians, in [0, pi/2]
  bool ranks_match = false;
  // |frobenius - sqrt(2)*||(I - P)P_hat||_F|; only meaningful when ranks match,
  // where the two routes agree up to roundoff.
  double frobenius_identity_gap = 0.0;
};

// Both inputs must be symmetric and idempotent within 1e-6 (Frobenius).
SubspaceError projection_error(const Eigen::MatrixXd& p_hat, const Eigen::MatrixXd& p);

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

// Least-squares slope of log(error) against log(N). Needs >= 2 points and
// strictly positive errors.
double loglog_slope(const std::vector<double>& ns, const std::vector<double>& errors);

// Spearman rank correlation; ties receive average ranks. Returns 0 when either
// input is constant.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sdr::metrics
