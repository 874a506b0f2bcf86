#include "sdr/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sdr/rcls.hpp"

namespace sdr {

std::string to_string(SdrMethod method) {
  switch (method) {
    case SdrMethod::rcls: return "RCLS";
    case SdrMethod::sir: return "SIR";
    case SdrMethod::sir2: return "SIRII";
    case SdrMethod::save: return "SAVE";
    case SdrMethod::dr: return "DR";
    case SdrMethod::phd: return "PHD";
  }
  throw std::logic_error("unknown SdrMethod");
}

SdrMethod method_from_string(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "RCLS") return SdrMethod::rcls;
  if (up == "SIR") return SdrMethod::sir;
  if (up == "SIRII" || up == "SIR2") return SdrMethod::sir2;
  if (up == "SAVE") return SdrMethod::save;
  if (up == "DR") return SdrMethod::dr;
  if (up == "PHD") return SdrMethod::phd;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected RCLS, SIR, SIRII, SAVE, DR or PHD)");
}

namespace baselines {

namespace {

Matrix symmetrized(const Matrix& m) { return ((m + m.transpose()) / 2.0).eval(); }

// Collects the indices of usable slices; throws if none remain.
std::vector<std::size_t> usable_slices(const std::vector<SliceMoments>& moments) {
  std::vector<std::size_t> idx;
  for (std::size_t l = 0; l < moments.size(); ++l) {
    if (!moments[l].degenerate) idx.push_back(l);
  }
  if (idx.empty()) {
    throw std::runtime_error("all response slices have fewer than two samples");
  }
  return idx;
}

Matrix sir_matrix(const std::vector<SliceMoments>& moments, Eigen::Index dim) {
  Matrix lambda = Matrix::Zero(dim, dim);
  for (const std::size_t l : usable_slices(moments)) {
    const auto& m = moments[l];
    lambda.noalias() += m.weight * (m.mean * m.mean.transpose());
  }
  return symmetrized(lambda);
}

Matrix sir2_matrix(const std::vector<SliceMoments>& moments, Eigen::Index dim) {
  const auto used = usable_slices(moments);
  double total = 0.0;
  for (const std::size_t l : used) total += moments[l].weight;
  Matrix mean_cov = Matrix::Zero(dim, dim);
  for (const std::size_t l : used) {
    mean_cov.noalias() += (moments[l].weight / total) * moments[l].cov;
  }
  Matrix lambda = Matrix::Zero(dim, dim);
  for (const std::size_t l : used) {
    const Matrix dev = moments[l].cov - mean_cov;
    lambda.noalias() += moments[l].weight * (dev * dev);
  }
  return symmetrized(lambda);
}

Matrix save_matrix(const std::vector<SliceMoments>& moments, Eigen::Index dim) {
  const Matrix id = Matrix::Identity(dim, dim);
  Matrix lambda = Matrix::Zero(dim, dim);
  for (const std::size_t l : usable_slices(moments)) {
    const Matrix dev = id - moments[l].cov;
    lambda.noalias() += moments[l].weight * (dev * dev);
  }
  return symmetrized(lambda);
}

// Pairwise slice reduction. Cov(Z - Z' | slices i, j) for independent copies
// equals V_i + V_j + (m_i - m_j)(m_i - m_j)^T, so the double loop below is the
// population double expectation quantized over slice pairs. Parallel over the
// first index with per-row partials, merged in index order, so the result is
// identical to a straight double loop that accumulates row partials.
Matrix dr_matrix(const std::vector<SliceMoments>& moments, Eigen::Index dim, Exec exec) {
  const auto used = usable_slices(moments);
  const Matrix id2 = 2.0 * Matrix::Identity(dim, dim);
  std::vector<Matrix> partial(used.size(), Matrix::Zero(dim, dim));
  for_each_index(exec, static_cast<std::int64_t>(used.size()), [&](std::int64_t a) {
    const auto& mi = moments[used[static_cast<std::size_t>(a)]];
    Matrix acc = Matrix::Zero(dim, dim);
    for (std::size_t b = 0; b < used.size(); ++b) {
      const auto& mj = moments[used[b]];
      const Vector md = mi.mean - mj.mean;
      const Matrix dev = id2 - (mi.cov + mj.cov + md * md.transpose());
      acc.noalias() += (mi.weight * mj.weight) * (dev * dev);
    }
    partial[static_cast<std::size_t>(a)] = acc;
  });
  Matrix lambda = Matrix::Zero(dim, dim);
  for (const auto& p : partial) lambda += p;
  return symmetrized(lambda);
}

Matrix phd_matrix(const Matrix& z, const Vector& y) {
  const double mean_y = y.mean();
  Matrix lambda = (z.transpose() * (y.array() - mean_y).matrix().asDiagonal() * z) /
                  static_cast<double>(z.rows());
  return symmetrized(lambda);
}

}  // namespace

WhitenedData whiten(const Dataset& ds, double rtol) {
  if (ds.n() < 2) {
    throw std::invalid_argument("whiten: need at least two samples");
  }
  WhitenedData wd;
  wd.mean_x = ds.x.colwise().mean();
  const Matrix xc = ds.x.rowwise() - wd.mean_x.transpose();
  Matrix cov = (xc.transpose() * xc) / static_cast<double>(ds.n());
  cov = symmetrized(cov);
  const auto eig = numkit::sym_eig(cov);
  if (!(eig.eigenvalues(0) > 0.0)) {
    throw std::runtime_error("whiten: sample covariance is zero");
  }
  const double cut = rtol * eig.eigenvalues(0);
  wd.rank = static_cast<int>((eig.eigenvalues.array() > cut).count());
  wd.whitener = numkit::pinv_sqrt_psd(cov, rtol);
  wd.z = xc * wd.whitener;  // whitener is symmetric
  return wd;
}

std::vector<SliceMoments> slice_moments(const Matrix& z, const LevelSetAssignment& assign,
                                        Exec exec) {
  std::vector<SliceMoments> moments(assign.levels.size());
  const auto n_total = static_cast<double>(z.rows());
  for_each_index(exec, static_cast<std::int64_t>(assign.levels.size()), [&](std::int64_t l) {
    const auto& rows = assign.levels[static_cast<std::size_t>(l)];
    SliceMoments m;
    m.count = static_cast<Eigen::Index>(rows.size());
    m.weight = static_cast<double>(m.count) / n_total;
    m.mean = Vector::Zero(z.cols());
    m.cov = Matrix::Zero(z.cols(), z.cols());
    if (m.count >= 1) {
      Matrix zs(m.count, z.cols());
      for (Eigen::Index i = 0; i < m.count; ++i) {
        zs.row(i) = z.row(rows[static_cast<std::size_t>(i)]);
      }
      m.mean = zs.colwise().mean();
      if (m.count >= 2) {
        const Matrix zc = zs.rowwise() - m.mean.transpose();
        m.cov = symmetrized((zc.transpose() * zc) / static_cast<double>(m.count));
        m.degenerate = false;
      }
    }
    moments[static_cast<std::size_t>(l)] = m;
  });
  return moments;
}

Matrix candidate_from_moments(SdrMethod method, const std::vector<SliceMoments>& moments,
                              Eigen::Index dim, Exec exec) {
  switch (method) {
    case SdrMethod::sir: return sir_matrix(moments, dim);
    case SdrMethod::sir2: return sir2_matrix(moments, dim);
    case SdrMethod::save: return save_matrix(moments, dim);
    case SdrMethod::dr: return dr_matrix(moments, dim, exec);
    default:
      throw std::invalid_argument("candidate_from_moments: method has no slice candidate matrix");
  }
}

Matrix phd_candidate(const Matrix& z, const Vector& y) { return phd_matrix(z, y); }

CandidateMatrix candidate_matrix(SdrMethod method, const WhitenedData& wd, const Vector& y,
                                 const LevelSetAssignment& assign, Exec exec) {
  const Eigen::Index dim = wd.z.cols();
  CandidateMatrix out;
  out.method = method;
  if (method == SdrMethod::phd) {
    out.lambda = phd_matrix(wd.z, y);
    return out;
  }
  const auto moments = slice_moments(wd.z, assign, exec);
  out.lambda = candidate_from_moments(method, moments, dim, exec);
  return out;
}

numkit::EigenDecomposition abs_sorted(const numkit::EigenDecomposition& eig) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(eig.eigenvalues.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(eig.eigenvalues(a)) > std::abs(eig.eigenvalues(b));
  });
  numkit::EigenDecomposition out;
  out.eigenvalues.resize(eig.eigenvalues.size());
  out.eigenvectors.resize(eig.eigenvectors.rows(), eig.eigenvectors.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.eigenvalues(static_cast<Eigen::Index>(i)) = eig.eigenvalues(order[i]);
    out.eigenvectors.col(static_cast<Eigen::Index>(i)) = eig.eigenvectors.col(order[i]);
  }
  return out;
}

}  // namespace baselines

ProjectionEstimate estimate_from_candidate(SdrMethod method, const numkit::Matrix& lambda,
                                           const baselines::WhitenedData& wd, int j, int d_tilde,
                                           double rtol) {
  ProjectionEstimate est;
  est.method = method;
  est.j = method == SdrMethod::phd ? 0 : j;
  est.d_tilde = d_tilde;
  est.rtol = rtol;
  est.spectrum = numkit::sym_eig(lambda);
  if (method == SdrMethod::phd) {
    est.spectrum = baselines::abs_sorted(est.spectrum);
  }
  const numkit::Matrix directions = wd.whitener * est.spectrum.eigenvectors.leftCols(d_tilde);
  est.basis = numkit::orthonormalize(directions);
  est.projector = numkit::projector_from_basis(est.basis);
  const double top = std::abs(est.spectrum.eigenvalues(0));
  est.rank_deficient =
      !(top > 0.0) || std::abs(est.spectrum.eigenvalues(d_tilde - 1)) <= 1e-12 * top;
  return est;
}

ProjectionEstimate fit_sdr(const Dataset& ds, SdrMethod method, int j, int d_tilde, double rtol,
                           Exec exec) {
  if (method == SdrMethod::rcls) {
    throw std::invalid_argument("fit_sdr covers the slice baselines; use fit_index_space for rcls");
  }
  if (d_tilde < 1 || d_tilde > ds.dim()) {
    throw std::invalid_argument("fit_sdr: need 1 <= d_tilde <= D");
  }
  if (method != SdrMethod::phd && j < 1) {
    throw std::invalid_argument("fit_sdr: need J >= 1");
  }

  const auto wd = baselines::whiten(ds, rtol);
  LevelSetAssignment assign;
  if (method != SdrMethod::phd) {
    assign = assign_level_sets(ds, dyadic_partition(ds.y, j));
  }
  const auto cand = baselines::candidate_matrix(method, wd, ds.y, assign, exec);
  return estimate_from_candidate(method, cand.lambda, wd, j, d_tilde, rtol);
}

ProjectionEstimate fit_index_space(const Dataset& ds, SdrMethod method, int j, int d_tilde,
                                   double rtol, Exec exec) {
  if (method != SdrMethod::rcls) {
    return fit_sdr(ds, method, j, d_tilde, rtol, exec);
  }
  const auto model = rcls::rcls_projector(ds, j, d_tilde, rtol, exec);
  ProjectionEstimate est;
  est.method = SdrMethod::rcls;
  est.j = model.j;
  est.d_tilde = model.d_tilde;
  est.rtol = rtol;
  est.basis = model.basis;
  est.projector = model.projector;
  est.spectrum = model.spectrum;
  est.rank_deficient = model.rank_deficient;
  return est;
}

}  // namespace sdr
