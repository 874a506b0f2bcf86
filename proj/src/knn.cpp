#include "sdr/knn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sdr::regress {

KnnModel make_knn_model(Matrix train_x, Vector train_y, Matrix projector, int k) {
  if (train_x.rows() < 1 || train_x.rows() != train_y.size()) {
    throw std::invalid_argument("knn: training matrix and responses must match, N >= 1");
  }
  if (k < 1 || k > train_x.rows()) {
    throw std::invalid_argument("knn: need 1 <= k <= N");
  }
  numkit::check_symmetric(projector);
  if (projector.rows() != train_x.cols()) {
    throw std::invalid_argument("knn: projector dimension does not match predictors");
  }
  KnnModel model;
  model.train_x = std::move(train_x);
  model.train_y = std::move(train_y);
  model.projector = std::move(projector);
  model.k = k;
  model.projected_train = model.train_x * model.projector;  // projector symmetric
  return model;
}

double knn_predict(const KnnModel& model, const Vector& x) {
  const Eigen::Index n = model.train_x.rows();
  const Vector px = model.projector * x;
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    dist[static_cast<std::size_t>(i)] = {
        (model.projected_train.row(i).transpose() - px).squaredNorm(), i};
  }
  const auto kth = dist.begin() + (model.k - 1);
  std::nth_element(dist.begin(), kth, dist.end());
  std::sort(dist.begin(), kth + 1);
  double sum = 0.0;
  for (int i = 0; i < model.k; ++i) {
    sum += model.train_y(dist[static_cast<std::size_t>(i)].second);
  }
  return sum / model.k;
}

Vector knn_predict_batch(const KnnModel& model, const Matrix& queries, Exec exec) {
  if (queries.cols() != model.train_x.cols()) {
    throw std::invalid_argument("knn: query dimension does not match training data");
  }
  Vector out(queries.rows());
  for_each_index(exec, queries.rows(), [&](std::int64_t i) {
    out(i) = knn_predict(model, queries.row(i).transpose());
  });
  return out;
}

int knn_theoretical_k(std::int64_t n, double s, int d, double c_k) {
  if (n < 1 || !(s > 0.0) || d < 1 || !(c_k > 0.0)) {
    throw std::invalid_argument("knn_theoretical_k: need N >= 1, s > 0, d >= 1, c_k > 0");
  }
  const double exponent = 2.0 * s / (2.0 * s + static_cast<double>(d));
  const double k = c_k * std::pow(static_cast<double>(n), exponent);
  return std::max(1, static_cast<int>(std::llround(k)));
}

}  // namespace sdr::regress
