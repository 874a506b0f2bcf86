#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "sdr/dataset.hpp"
#include "sdr/numkit.hpp"
#include "sdr/parallel.hpp"

namespace sdr::regress {

using numkit::Matrix;
using numkit::Vector;

// Integer corner coordinates of an axis-aligned dyadic cube at a fixed level:
// the cell is the half-open box prod_j [v_j * 2^-l, (v_j + 1) * 2^-l).
struct DyadicCellId {
  std::vector<std::int64_t> coords;

  bool operator==(const DyadicCellId&) const = default;
  bool operator<(const DyadicCellId& other) const { return coords < other.coords; }
};

DyadicCellId cell_of(const Vector& u, int level);

// Upper bound on how many level-l cells can meet the image of the radius-R
// ball: ceil((2^(l+1) * R)^d).
double cell_count_bound(int level, double radius, int d);

// Ids of the cells containing basis^T x for every row with ||x|| <= radius.
std::vector<DyadicCellId> enumerate_cells(const Matrix& basis, const Matrix& points, int level,
                                          double radius);

// Exponent tuples of the d-variate monomials of total degree <= degree, in
// graded lexicographic order.
std::vector<std::vector<int>> monomial_exponents(int d, int degree);

// Piecewise polynomial regressor on a dyadic partition of the projected
// coordinates. Each occupied cell carries one coefficient vector over
// monomials centered at the cell midpoint; everything outside the support
// ball or in unoccupied cells predicts zero before truncation.
struct PiecewisePolyModel {
  Matrix basis;  // D x d, orthonormal
  int level = 0;
  int degree = 0;
  double radius = 1.0;
  std::array<double, 2> truncation{-1.0, 1.0};
  std::map<DyadicCellId, Vector> cells;
  std::vector<std::vector<int>> exponents;  // shared monomial layout
};

// Fits by least squares independently per cell (the function space decouples
// across cells, so this is the global empirical risk minimizer); rank
// deficient cell designs take the minimum-norm solution. Training points
// outside the radius are ignored.
PiecewisePolyModel piecewise_poly_fit(const Dataset& train, const Matrix& basis, int level,
                                      int degree, double radius,
                                      std::array<double, 2> truncation,
                                      Exec exec = Exec::parallel);

double piecewise_poly_predict(const PiecewisePolyModel& model, const Vector& x);

Vector piecewise_poly_predict_batch(const PiecewisePolyModel& model, const Matrix& queries,
                                    Exec exec = Exec::parallel);

// Theory-guided partition level and support radius:
// level = ceil(log2(N) / (2s + d)), radius = sqrt(sigma_x_sq * log N), with
// the log factor optional for bounded predictors (pass sigma_x_sq = r^2).
struct PpHyperparams {
  int level = 0;
  double radius = 0.0;
};
PpHyperparams theoretical_hyperparams(std::int64_t n, double s, int d, double sigma_x_sq,
                                      bool log_factor = true);

}  // namespace sdr::regress
