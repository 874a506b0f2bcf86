#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sdr {

// A regression sample set: N predictor rows of dimension D with scalar
// responses. Immutable by convention once built; all pipeline steps return
// fresh copies.
struct Dataset {
  Eigen::MatrixXd x;  // N x D
  Eigen::VectorXd y;  // N
  std::vector<std::string> feature_names;  // size D
  std::string response_name = "y";

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index dim() const { return x.cols(); }
};

// Builds a dataset from raw matrices, filling in x1..xD feature names and
// checking shapes and finiteness.
Dataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y);

// Per-column affine rescaling x' = scale * x + offset.
struct AffineMap {
  double scale = 1.0;
  double offset = 0.0;
  double apply(double v) const { return scale * v + offset; }
  double invert(double v) const { return (v - offset) / scale; }
};

// Ordered interval decomposition of the response range into J level sets.
// Interval l is [edges[l], edges[l+1]); the last one is closed on the right.
struct ResponsePartition {
  std::vector<double> edges;  // strictly increasing, size J+1

  int intervals() const { return static_cast<int>(edges.size()) - 1; }
  // Index of the interval containing y (values at an interior edge go right,
  // values at or beyond the outer edges clamp into the end intervals).
  int locate(double y) const;
};

// Disjoint per-level row-index lists covering [0, N). Empty levels are kept
// so that level <-> interval indexing stays stable.
struct LevelSetAssignment {
  std::vector<std::vector<Eigen::Index>> levels;

  int count() const { return static_cast<int>(levels.size()); }
};

// CSV ingestion: UTF-8, comma separated, one header row, decimal-point
// numerics. The response column is selected by name, or by index with the
// overload (negative counts from the end). Malformed cells are reported with
// their row and column.
Dataset load_csv(const std::string& path, const std::string& response_column);
Dataset load_csv(const std::string& path, int response_index);

// Writes a dataset back in the same CSV format (header row, predictors in
// column order, response last).
void save_csv(const Dataset& ds, const std::string& path);

// Rescales every feature column onto [-1, 1]; constant columns map to zero.
// Returns the transformed dataset and the per-column maps that were applied.
std::pair<Dataset, std::vector<AffineMap>> standardize_features(const Dataset& ds);

// Replaces Y by log(Y + offset); every shifted response must be positive.
Dataset log_transform_response(const Dataset& ds, double offset = 0.0);

// J equal-width intervals spanning the observed response range.
ResponsePartition dyadic_partition(const Eigen::VectorXd& y, int j);

LevelSetAssignment assign_level_sets(const Dataset& ds, const ResponsePartition& part);

// Rows of ds selected by `rows`, in the given order.
Dataset subset(const Dataset& ds, const std::vector<Eigen::Index>& rows);

// Uniform random split without replacement; the test set receives
// ceil(test_fraction * N) rows. Reproducible per seed.
std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

// k disjoint validation folds covering [0, N), sizes differing by at most 1.
std::vector<std::vector<Eigen::Index>> kfold_indices(Eigen::Index n, int k, std::uint64_t seed);

}  // namespace sdr
