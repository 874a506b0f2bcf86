#pragma once

#include <cstdint>

#include "sdr/numkit.hpp"
#include "sdr/parallel.hpp"

namespace sdr::regress {

using numkit::Matrix;
using numkit::Vector;

// Nearest-neighbor regressor over projected distances ||P(x - X_i)||.
// Projected training rows are cached at construction; distances are computed
// against the projector itself, so any basis of the same subspace gives the
// same predictions.
struct KnnModel {
  Matrix train_x;   // N x D
  Vector train_y;   // N
  Matrix projector; // D x D orthoprojector
  int k = 1;
  Matrix projected_train;  // N x D, rows P * x_i
};

KnnModel make_knn_model(Matrix train_x, Vector train_y, Matrix projector, int k);

// Mean response of the k nearest training points in projected distance;
// distance ties break toward the smaller training index.
double knn_predict(const KnnModel& model, const Vector& x);

Vector knn_predict_batch(const KnnModel& model, const Matrix& queries,
                         Exec exec = Exec::parallel);

// max(1, round(c_k * N^(2s/(2s+d)))).
int knn_theoretical_k(std::int64_t n, double s, int d, double c_k);

}  // namespace sdr::regress
