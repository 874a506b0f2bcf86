#include "sdr/rcls.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdr::rcls {

namespace {

// Relative floor below which an eigenvalue counts as numerically zero.
constexpr double kZeroEig = 1e-12;

LevelSetStats stats_for_rows(const Dataset& ds, const std::vector<Eigen::Index>& rows,
                             double rtol) {
  LevelSetStats st;
  const Eigen::Index dim = ds.dim();
  st.count = static_cast<Eigen::Index>(rows.size());
  st.weight = static_cast<double>(st.count) / static_cast<double>(ds.n());
  st.mean_x = Vector::Zero(dim);
  st.cov_x = Matrix::Zero(dim, dim);
  st.cov_xy = Vector::Zero(dim);
  st.ols = Vector::Zero(dim);
  if (st.count == 0) return st;

  Matrix xs(st.count, dim);
  Vector ys(st.count);
  for (Eigen::Index i = 0; i < st.count; ++i) {
    xs.row(i) = ds.x.row(rows[static_cast<std::size_t>(i)]);
    ys(i) = ds.y(rows[static_cast<std::size_t>(i)]);
  }
  const auto n = static_cast<double>(st.count);
  st.mean_x = xs.colwise().mean();
  st.mean_y = ys.mean();
  if (st.count < 2) return st;

  const Matrix xc = xs.rowwise() - st.mean_x.transpose();
  const Vector yc = ys.array() - st.mean_y;
  st.var_y = yc.squaredNorm() / n;
  st.cov_x = (xc.transpose() * xc) / n;
  st.cov_x = ((st.cov_x + st.cov_x.transpose()) / 2.0).eval();
  st.cov_xy = (xc.transpose() * yc) / n;
  try {
    st.ols = numkit::pinv_psd(st.cov_x, rtol) * st.cov_xy;
    st.degenerate = false;
  } catch (const std::exception&) {
    // Covariance at the absolute roundoff floor (e.g. duplicated points);
    // treat the level set as degenerate rather than killing a sweep.
    st.ols.setZero();
    st.degenerate = true;
  }
  return st;
}

}  // namespace

OlsResult conditional_ols(const Matrix& xs, const Vector& ys, double rtol) {
  if (xs.rows() != ys.size()) {
    throw std::invalid_argument("conditional_ols: row count and response length differ");
  }
  OlsResult res;
  res.slope = Vector::Zero(xs.cols());
  if (xs.rows() < 2) {
    res.degenerate = true;
    return res;
  }
  const auto n = static_cast<double>(xs.rows());
  const Eigen::RowVectorXd mean_x = xs.colwise().mean();
  const Matrix xc = xs.rowwise() - mean_x;
  const Vector yc = ys.array() - ys.mean();
  Matrix cov = (xc.transpose() * xc) / n;
  cov = ((cov + cov.transpose()) / 2.0).eval();
  const Vector cov_xy = (xc.transpose() * yc) / n;
  res.slope = numkit::pinv_psd(cov, rtol) * cov_xy;
  return res;
}

std::vector<LevelSetStats> level_set_stats(const Dataset& ds, const LevelSetAssignment& assign,
                                           double rtol, Exec exec) {
  std::vector<LevelSetStats> stats(assign.levels.size());
  for_each_index(exec, static_cast<std::int64_t>(assign.levels.size()), [&](std::int64_t l) {
    stats[static_cast<std::size_t>(l)] =
        stats_for_rows(ds, assign.levels[static_cast<std::size_t>(l)], rtol);
  });
  return stats;
}

Matrix rcls_matrix_from_stats(const std::vector<LevelSetStats>& stats) {
  if (stats.empty()) {
    throw std::invalid_argument("rcls_matrix_from_stats: no level sets");
  }
  const Eigen::Index dim = stats.front().mean_x.size();
  Matrix m = Matrix::Zero(dim, dim);
  bool any = false;
  for (const auto& st : stats) {
    if (st.degenerate) continue;
    m.noalias() += st.weight * (st.ols * st.ols.transpose());
    any = true;
  }
  if (!any) {
    throw std::runtime_error("rcls_matrix: every level set has fewer than two samples");
  }
  return ((m + m.transpose()) / 2.0).eval();
}

std::pair<Matrix, std::vector<LevelSetStats>> rcls_matrix(const Dataset& ds, int j, double rtol,
                                                          Exec exec) {
  const ResponsePartition part = dyadic_partition(ds.y, j);
  const LevelSetAssignment assign = assign_level_sets(ds, part);
  auto stats = level_set_stats(ds, assign, rtol, exec);
  Matrix m = rcls_matrix_from_stats(stats);
  return {std::move(m), std::move(stats)};
}

RclsModel rcls_projector_with_assignment(const Dataset& ds, const ResponsePartition& part,
                                         const LevelSetAssignment& assign, int d_tilde,
                                         double rtol, Exec exec) {
  if (d_tilde < 1 || d_tilde > ds.dim()) {
    throw std::invalid_argument("rcls_projector: need 1 <= d_tilde <= D");
  }
  RclsModel model;
  model.j = part.intervals();
  model.d_tilde = d_tilde;
  model.rtol = rtol;
  model.partition = part;
  model.per_level = level_set_stats(ds, assign, rtol, exec);
  model.m_matrix = rcls_matrix_from_stats(model.per_level);
  model.spectrum = numkit::sym_eig(model.m_matrix);
  model.basis = model.spectrum.eigenvectors.leftCols(d_tilde);
  model.projector = numkit::projector_from_basis(model.basis);
  model.rank_deficient =
      model.spectrum.eigenvalues(d_tilde - 1) <= kZeroEig * model.spectrum.eigenvalues(0);
  return model;
}

RclsModel rcls_projector(const Dataset& ds, int j, int d_tilde, double rtol, Exec exec) {
  const ResponsePartition part = dyadic_partition(ds.y, j);
  const LevelSetAssignment assign = assign_level_sets(ds, part);
  return rcls_projector_with_assignment(ds, part, assign, d_tilde, rtol, exec);
}

int suggest_dim(const numkit::EigenDecomposition& spectrum) {
  const Eigen::Index d = spectrum.eigenvalues.size();
  if (d < 1) {
    throw std::invalid_argument("suggest_dim: empty spectrum");
  }
  const double top = spectrum.eigenvalues(0);
  if (!(top > 0.0)) return 0;
  const double floor = kZeroEig * top;
  if (d == 1) return 1;

  int best = 0;
  double best_ratio = -1.0;
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    if (spectrum.eigenvalues(i) <= floor) break;
    const double next = std::max(spectrum.eigenvalues(i + 1), 0.0);
    const double ratio =
        next > 0.0 ? spectrum.eigenvalues(i) / next : std::numeric_limits<double>::infinity();
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = static_cast<int>(i) + 1;
    }
  }
  if (best == 0) return 0;
  return best;
}

}  // namespace sdr::rcls
