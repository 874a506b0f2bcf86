#pragma once

#include <string>
#include <vector>

#include "sdr/dataset.hpp"
#include "sdr/numkit.hpp"
#include "sdr/parallel.hpp"
#include "sdr/rcls.hpp"

namespace sdr::proxy {

using numkit::Matrix;
using numkit::Vector;

// Worst restricted condition number of a level-set covariance, measured on
// the line spanned by the slope vector and on its orthogonal complement:
//   max{ ||P S P|| ||P S+ P||, ||Q S Q|| ||Q S+ Q|| }
// with P = b b^T / ||b||^2 and Q = I - P. At least 1 (up to roundoff) when
// both restrictions are nonsingular.
double kappa_hat(const Matrix& cov, const Vector& b, double rtol = numkit::kDefaultRtol);

// sqrt( mean((Y - Ybar)^2) * ||Q S+ Q|| ) for the same P/Q split.
double eta_perp_hat(const Vector& ys, const Matrix& cov, const Vector& b,
                    double rtol = numkit::kDefaultRtol);

// Variant taking the precomputed 1/n-normalized response variance.
double eta_perp_hat_from_var(double var_y, const Matrix& cov, const Vector& b,
                             double rtol = numkit::kDefaultRtol);

struct ProxyLevelTerm {
  int level = 0;  // 1-based interval index
  Eigen::Index count = 0;
  double weight = 0.0;
  double kappa = 0.0;
  double ols_norm = 0.0;
  double eta_perp = 0.0;
  bool included = false;  // participates in the numerator sum
};

// Level-set-count diagnostic for one J: the numerator sums
// sqrt(weight * kappa) * ||b|| * eta_perp over sufficiently populated level
// sets and is divided by gamma_hat, the d-th eigenvalue of the slope
// outer-product matrix. The logfactor variant multiplies by sqrt(1 + log J).
struct ProxyReport {
  int j = 0;
  bool valid = false;  // gamma_hat > 0
  double proxy_value = 0.0;
  double proxy_value_logfactor = 0.0;
  double gamma_hat = 0.0;
  int n_included = 0;
  std::vector<ProxyLevelTerm> per_level;
};

// Builds the report from an existing fit; d_for_gamma picks which eigenvalue
// plays gamma_hat. Level sets need count > 5 * D to be included.
ProxyReport proxy_report_from_model(const rcls::RclsModel& model, int d_for_gamma);

// One report per J in the grid, each from a fresh fit of the corresponding
// equal-width partition. Invalid reports (gamma_hat <= 0) are kept in place
// so the scan always returns a full grid. Scans are parallel over J.
std::vector<ProxyReport> proxy_scan(const Dataset& ds, const std::vector<int>& j_grid,
                                    int d_tilde, double rtol = numkit::kDefaultRtol,
                                    Exec exec = Exec::parallel);

// Scan export with fixed column order:
// J,proxy,proxy_logfactor,gamma_hat,n_included_levels
void write_proxy_scan_csv(const std::string& path, const std::vector<ProxyReport>& reports);

}  // namespace sdr::proxy
