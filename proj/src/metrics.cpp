#include "sdr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sdr/numkit.hpp"

namespace sdr::metrics {

namespace {

void check_projector(const Eigen::MatrixXd& p, const char* name) {
  numkit::check_symmetric(p);
  const double idem = (p * p - p).norm();
  if (idem > 1e-6) {
    throw std::invalid_argument(std::string(name) + " is not idempotent (||P^2 - P||_F = " +
                                std::to_string(idem) + ")");
  }
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

SubspaceError projection_error(const Eigen::MatrixXd& p_hat, const Eigen::MatrixXd& p) {
  check_projector(p_hat, "first projector");
  check_projector(p, "second projector");
  if (p_hat.rows() != p.rows()) {
    throw std::invalid_argument("projector dimensions differ");
  }

  SubspaceError err;
  const Eigen::MatrixXd diff = p_hat - p;
  err.frobenius = diff.norm();
  err.spectral = numkit::spectral_norm_sym(diff);
  err.largest_principal_angle = std::asin(std::min(1.0, std::max(0.0, err.spectral)));

  const auto rank_a = static_cast<long>(std::llround(p_hat.trace()));
  const auto rank_b = static_cast<long>(std::llround(p.trace()));
  err.ranks_match = (rank_a == rank_b);
  if (err.ranks_match) {
    const Eigen::MatrixXd complement =
        (Eigen::MatrixXd::Identity(p.rows(), p.cols()) - p) * p_hat;
    err.frobenius_identity_gap = std::abs(err.frobenius - std::sqrt(2.0) * complement.norm());
  }
  return err;
}

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
  if (pred.size() != truth.size() || pred.size() < 1) {
    throw std::invalid_argument("rmse: vectors must have equal positive length");
  }
  return std::sqrt((pred - truth).squaredNorm() / static_cast<double>(pred.size()));
}

double loglog_slope(const std::vector<double>& ns, const std::vector<double>& errors) {
  if (ns.size() != errors.size() || ns.size() < 2) {
    throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  }
  std::vector<double> lx(ns.size()), ly(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(ns[i] > 0.0) || !(errors[i] > 0.0)) {
      throw std::invalid_argument("loglog_slope: sample sizes and errors must be positive");
    }
    lx[i] = std::log(ns[i]);
    ly[i] = std::log(errors[i]);
  }
  const auto n = static_cast<double>(ns.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx <= 0.0) {
    throw std::invalid_argument("loglog_slope: sample sizes must not all coincide");
  }
  return sxy / sxx;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("spearman: need >= 2 matching points");
  }
  return pearson(average_ranks(a), average_ranks(b));
}

}  // namespace sdr::metrics
