#include "sdr/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace sdr::regress {

namespace {

double clamp_to(const std::array<double, 2>& bounds, double v) {
  return std::min(bounds[1], std::max(bounds[0], v));
}

Vector monomial_row(const std::vector<std::vector<int>>& exponents, const Vector& t) {
  Vector row(static_cast<Eigen::Index>(exponents.size()));
  for (std::size_t m = 0; m < exponents.size(); ++m) {
    double v = 1.0;
    for (std::size_t j = 0; j < exponents[m].size(); ++j) {
      for (int p = 0; p < exponents[m][j]; ++p) v *= t(static_cast<Eigen::Index>(j));
    }
    row(static_cast<Eigen::Index>(m)) = v;
  }
  return row;
}

Vector cell_midpoint(const DyadicCellId& id, int level) {
  const double side = std::ldexp(1.0, -level);  // 2^-level
  Vector mid(static_cast<Eigen::Index>(id.coords.size()));
  for (std::size_t j = 0; j < id.coords.size(); ++j) {
    mid(static_cast<Eigen::Index>(j)) = (static_cast<double>(id.coords[j]) + 0.5) * side;
  }
  return mid;
}

}  // namespace

DyadicCellId cell_of(const Vector& u, int level) {
  const double scale = std::ldexp(1.0, level);  // 2^level
  DyadicCellId id;
  id.coords.resize(static_cast<std::size_t>(u.size()));
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    id.coords[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::floor(u(j) * scale));
  }
  return id;
}

double cell_count_bound(int level, double radius, int d) {
  return std::ceil(std::pow(std::ldexp(1.0, level + 1) * radius, d));
}

std::vector<DyadicCellId> enumerate_cells(const Matrix& basis, const Matrix& points, int level,
                                          double radius) {
  if (level < 0 || !(radius > 0.0)) {
    throw std::invalid_argument("enumerate_cells: need level >= 0 and radius > 0");
  }
  std::set<DyadicCellId> seen;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (points.row(i).norm() > radius) continue;
    seen.insert(cell_of(basis.transpose() * points.row(i).transpose(), level));
  }
  std::vector<DyadicCellId> out(seen.begin(), seen.end());
  if (static_cast<double>(out.size()) > cell_count_bound(level, radius, static_cast<int>(basis.cols()))) {
    throw std::logic_error("enumerate_cells: occupied cells exceed the covering bound");
  }
  return out;
}

std::vector<std::vector<int>> monomial_exponents(int d, int degree) {
  if (d < 1 || degree < 0) {
    throw std::invalid_argument("monomial_exponents: need d >= 1 and degree >= 0");
  }
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(d), 0);
  // Graded order: all tuples of total degree g, lexicographically within g.
  auto emit = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == d - 1) {
      current[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(current);
      return;
    }
    for (int take = remaining; take >= 0; --take) {
      current[static_cast<std::size_t>(pos)] = take;
      self(self, pos + 1, remaining - take);
    }
  };
  for (int g = 0; g <= degree; ++g) emit(emit, 0, g);
  return out;
}

PiecewisePolyModel piecewise_poly_fit(const Dataset& train, const Matrix& basis, int level,
                                      int degree, double radius,
                                      std::array<double, 2> truncation, Exec exec) {
  if (level < 0 || degree < 0 || !(radius > 0.0)) {
    throw std::invalid_argument("piecewise_poly_fit: need level >= 0, degree >= 0, radius > 0");
  }
  if (!(truncation[0] <= truncation[1])) {
    throw std::invalid_argument("piecewise_poly_fit: truncation bounds out of order");
  }
  if (basis.rows() != train.dim()) {
    throw std::invalid_argument("piecewise_poly_fit: basis rows must match predictor dimension");
  }
  // Basis must be orthonormal; reuse the projector check.
  (void)numkit::projector_from_basis(basis);

  PiecewisePolyModel model;
  model.basis = basis;
  model.level = level;
  model.degree = degree;
  model.radius = radius;
  model.truncation = truncation;
  model.exponents = monomial_exponents(static_cast<int>(basis.cols()), degree);

  // Bucket in-support training rows by cell; the ordered map fixes the fit
  // order regardless of execution policy.
  std::map<DyadicCellId, std::vector<Eigen::Index>> buckets;
  for (Eigen::Index i = 0; i < train.n(); ++i) {
    if (train.x.row(i).norm() > radius) continue;
    buckets[cell_of(basis.transpose() * train.x.row(i).transpose(), level)].push_back(i);
  }
  if (static_cast<double>(buckets.size()) >
      cell_count_bound(level, radius, static_cast<int>(basis.cols()))) {
    throw std::logic_error("piecewise_poly_fit: occupied cells exceed the covering bound");
  }

  std::vector<std::pair<const DyadicCellId*, const std::vector<Eigen::Index>*>> work;
  work.reserve(buckets.size());
  for (const auto& [id, rows] : buckets) work.emplace_back(&id, &rows);
  std::vector<Vector> coeffs(work.size());

  for_each_index(exec, static_cast<std::int64_t>(work.size()), [&](std::int64_t w) {
    const auto& [id, rows] = work[static_cast<std::size_t>(w)];
    const Vector mid = cell_midpoint(*id, level);
    const auto n_rows = static_cast<Eigen::Index>(rows->size());
    Matrix design(n_rows, static_cast<Eigen::Index>(model.exponents.size()));
    Vector target(n_rows);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
      const Eigen::Index row = (*rows)[static_cast<std::size_t>(r)];
      const Vector t = basis.transpose() * train.x.row(row).transpose() - mid;
      design.row(r) = monomial_row(model.exponents, t).transpose();
      target(r) = train.y(row);
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(design);
    coeffs[static_cast<std::size_t>(w)] = cod.solve(target);
  });

  for (std::size_t w = 0; w < work.size(); ++w) {
    model.cells.emplace(*work[w].first, std::move(coeffs[w]));
  }
  return model;
}

double piecewise_poly_predict(const PiecewisePolyModel& model, const Vector& x) {
  double raw = 0.0;
  if (x.norm() <= model.radius) {
    const Vector u = model.basis.transpose() * x;
    const auto it = model.cells.find(cell_of(u, model.level));
    if (it != model.cells.end()) {
      const Vector t = u - cell_midpoint(it->first, model.level);
      raw = monomial_row(model.exponents, t).dot(it->second);
    }
  }
  return clamp_to(model.truncation, raw);
}

Vector piecewise_poly_predict_batch(const PiecewisePolyModel& model, const Matrix& queries,
                                    Exec exec) {
  Vector out(queries.rows());
  for_each_index(exec, queries.rows(), [&](std::int64_t i) {
    out(i) = piecewise_poly_predict(model, queries.row(i).transpose());
  });
  return out;
}

PpHyperparams theoretical_hyperparams(std::int64_t n, double s, int d, double sigma_x_sq,
                                      bool log_factor) {
  if (n < 2 || !(s > 0.0) || d < 1 || !(sigma_x_sq > 0.0)) {
    throw std::invalid_argument(
        "theoretical_hyperparams: need N >= 2, s > 0, d >= 1, sigma_x_sq > 0");
  }
  PpHyperparams hp;
  hp.level = static_cast<int>(
      std::ceil(std::log2(static_cast<double>(n)) / (2.0 * s + static_cast<double>(d))));
  hp.radius = std::sqrt(sigma_x_sq * (log_factor ? std::log(static_cast<double>(n)) : 1.0));
  return hp;
}

}  // namespace sdr::regress
