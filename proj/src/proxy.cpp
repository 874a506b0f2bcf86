#include "sdr/proxy.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sdr::proxy {

namespace {

struct LineSplit {
  Matrix p;  // projector onto span{b}
  Matrix q;  // complement
};

LineSplit split_along(const Vector& b) {
  const double norm2 = b.squaredNorm();
  if (!(norm2 > 0.0)) {
    throw std::invalid_argument("slope vector must be nonzero");
  }
  LineSplit s;
  s.p = (b * b.transpose()) / norm2;
  s.q = Matrix::Identity(b.size(), b.size()) - s.p;
  return s;
}

double restricted_norm(const Matrix& proj, const Matrix& m) {
  const Matrix restricted = proj * m * proj;
  return numkit::spectral_norm_sym(((restricted + restricted.transpose()) / 2.0).eval());
}

}  // namespace

double kappa_hat(const Matrix& cov, const Vector& b, double rtol) {
  const LineSplit s = split_along(b);
  const Matrix pinv = numkit::pinv_psd(cov, rtol);
  const double along = restricted_norm(s.p, cov) * restricted_norm(s.p, pinv);
  const double across = restricted_norm(s.q, cov) * restricted_norm(s.q, pinv);
  return std::max(along, across);
}

double eta_perp_hat_from_var(double var_y, const Matrix& cov, const Vector& b, double rtol) {
  const LineSplit s = split_along(b);
  const Matrix pinv = numkit::pinv_psd(cov, rtol);
  return std::sqrt(std::max(0.0, var_y) * restricted_norm(s.q, pinv));
}

double eta_perp_hat(const Vector& ys, const Matrix& cov, const Vector& b, double rtol) {
  if (ys.size() < 2) {
    throw std::invalid_argument("eta_perp_hat: need at least two responses");
  }
  const double var_y = (ys.array() - ys.mean()).square().sum() / static_cast<double>(ys.size());
  return eta_perp_hat_from_var(var_y, cov, b, rtol);
}

ProxyReport proxy_report_from_model(const rcls::RclsModel& model, int d_for_gamma) {
  if (d_for_gamma < 1 || d_for_gamma > model.spectrum.eigenvalues.size()) {
    throw std::invalid_argument("proxy_report: d_for_gamma out of range");
  }
  const Eigen::Index dim = model.m_matrix.rows();
  const double min_count = 5.0 * static_cast<double>(dim);

  ProxyReport report;
  report.j = model.j;
  report.gamma_hat = model.spectrum.eigenvalues(d_for_gamma - 1);
  report.valid = report.gamma_hat > 0.0;

  double numerator = 0.0;
  for (std::size_t l = 0; l < model.per_level.size(); ++l) {
    const auto& st = model.per_level[l];
    ProxyLevelTerm term;
    term.level = static_cast<int>(l) + 1;
    term.count = st.count;
    term.weight = st.weight;
    const bool usable = !st.degenerate && st.ols.squaredNorm() > 0.0;
    if (usable) {
      term.ols_norm = st.ols.norm();
      term.kappa = kappa_hat(st.cov_x, st.ols, model.rtol);
      term.eta_perp = eta_perp_hat_from_var(st.var_y, st.cov_x, st.ols, model.rtol);
      term.included = static_cast<double>(st.count) > min_count;
    }
    if (term.included) {
      numerator += std::sqrt(term.weight * term.kappa) * term.ols_norm * term.eta_perp;
      ++report.n_included;
    }
    report.per_level.push_back(term);
  }

  if (report.valid) {
    report.proxy_value = numerator / report.gamma_hat;
    report.proxy_value_logfactor =
        report.proxy_value * std::sqrt(1.0 + std::log(static_cast<double>(model.j)));
  }
  return report;
}

std::vector<ProxyReport> proxy_scan(const Dataset& ds, const std::vector<int>& j_grid,
                                    int d_tilde, double rtol, Exec exec) {
  if (j_grid.empty()) {
    throw std::invalid_argument("proxy_scan: empty J grid");
  }
  if (d_tilde < 1) {
    throw std::invalid_argument("proxy_scan: need d_tilde >= 1");
  }
  std::vector<ProxyReport> reports(j_grid.size());
  for_each_index(exec, static_cast<std::int64_t>(j_grid.size()), [&](std::int64_t i) {
    const int j = j_grid[static_cast<std::size_t>(i)];
    try {
      const auto model = rcls::rcls_projector(ds, j, d_tilde, rtol, Exec::serial);
      reports[static_cast<std::size_t>(i)] = proxy_report_from_model(model, d_tilde);
    } catch (const std::exception&) {
      // A fit can collapse for extreme J (every level set too small); the
      // scan keeps going with an invalid placeholder.
      reports[static_cast<std::size_t>(i)].j = j;
      reports[static_cast<std::size_t>(i)].valid = false;
    }
  });
  return reports;
}

void write_proxy_scan_csv(const std::string& path, const std::vector<ProxyReport>& reports) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << "J,proxy,proxy_logfactor,gamma_hat,n_included_levels\n";
  out.precision(17);
  for (const auto& r : reports) {
    out << r.j << ',' << r.proxy_value << ',' << r.proxy_value_logfactor << ',' << r.gamma_hat
        << ',' << r.n_included << '\n';
  }
}

}  // namespace sdr::proxy
