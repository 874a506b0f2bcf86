#include "sdr/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "sdr/knn.hpp"
#include "sdr/metrics.hpp"
#include "sdr/proxy.hpp"
#include "sdr/rcls.hpp"
#include "sdr/rng.hpp"

namespace sdr::harness {

namespace {

using numkit::Matrix;
using numkit::Vector;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::pair<double, double> mean_std(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  if (v.empty()) return {0.0, 0.0};
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<int> range_grid(int lo, int hi) {
  std::vector<int> g;
  for (int v = lo; v <= hi; ++v) g.push_back(v);
  return g;
}

// Sum of squared prediction errors of projected kNN on a validation block,
// one entry per k in k_grid (inf where k exceeds the training size). A single
// neighbor ordering per query serves every k through prefix sums.
std::vector<double> knn_sq_err(const Matrix& u_train, const Vector& y_train, const Matrix& u_val,
                               const Vector& y_val, const std::vector<int>& k_grid) {
  const Eigen::Index n = u_train.rows();
  int k_max = 0;
  for (const int k : k_grid) {
    if (k >= 1 && k <= n) k_max = std::max(k_max, k);
  }
  std::vector<double> acc(k_grid.size(), 0.0);
  if (k_max == 0) {
    std::fill(acc.begin(), acc.end(), kInf);
    return acc;
  }
  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n));
  std::vector<double> prefix(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (Eigen::Index q = 0; q < u_val.rows(); ++q) {
    for (Eigen::Index i = 0; i < n; ++i) {
      dist[static_cast<std::size_t>(i)] = {(u_train.row(i) - u_val.row(q)).squaredNorm(), i};
    }
    const auto kth = dist.begin() + (k_max - 1);
    std::nth_element(dist.begin(), kth, dist.end());
    std::sort(dist.begin(), kth + 1);
    for (int i = 0; i < k_max; ++i) {
      prefix[static_cast<std::size_t>(i) + 1] =
          prefix[static_cast<std::size_t>(i)] + y_train(dist[static_cast<std::size_t>(i)].second);
    }
    for (std::size_t g = 0; g < k_grid.size(); ++g) {
      const int k = k_grid[g];
      if (k < 1 || k > n) {
        acc[g] = kInf;
        continue;
      }
      const double pred = prefix[static_cast<std::size_t>(k)] / k;
      const double diff = pred - y_val(q);
      acc[g] += diff * diff;
    }
  }
  return acc;
}

double knn_test_rmse(const Matrix& basis, const Dataset& train, const Dataset& test, int k) {
  const Matrix u_train = train.x * basis;
  const Matrix u_test = test.x * basis;
  const auto sq = knn_sq_err(u_train, train.y, u_test, test.y, {k});
  return std::sqrt(sq[0] / static_cast<double>(test.n()));
}

// Per-fold index-space bases for one method over (J, d); inf-filled on fit
// failure so degenerate grid points simply lose the selection.
struct SweepResult {
  // rmse_sum[d_idx][j_idx][k_idx], to be divided by fold count.
  std::vector<std::vector<std::vector<double>>> rmse_sum;
};

void accumulate_fold(SweepResult& out, const Dataset& train_f, const Dataset& val,
                     SdrMethod method, const CvGrids& grids, double rtol, Exec exec) {
  const Eigen::Index dim = train_f.dim();
  const bool is_phd = method == SdrMethod::phd;
  const std::size_t n_j = is_phd ? 1 : grids.j_grid.size();

  std::optional<baselines::WhitenedData> wd;
  if (method != SdrMethod::rcls) {
    wd = baselines::whiten(train_f, rtol);
  }

  for (std::size_t ji = 0; ji < n_j; ++ji) {
    numkit::EigenDecomposition spectrum;
    bool ok = true;
    try {
      if (method == SdrMethod::rcls) {
        spectrum = numkit::sym_eig(rcls::rcls_matrix(train_f, grids.j_grid[ji], rtol, exec).first);
      } else if (is_phd) {
        spectrum = numkit::sym_eig(baselines::phd_candidate(wd->z, train_f.y));
      } else {
        const auto assign =
            assign_level_sets(train_f, dyadic_partition(train_f.y, grids.j_grid[ji]));
        const auto moments = baselines::slice_moments(wd->z, assign, exec);
        spectrum =
            numkit::sym_eig(baselines::candidate_from_moments(method, moments, dim, exec));
      }
    } catch (const std::exception&) {
      ok = false;
    }
    if (ok && is_phd) {
      spectrum = baselines::abs_sorted(spectrum);  // signed candidate spectrum
    }

    for (std::size_t di = 0; di < grids.d_grid.size(); ++di) {
      const int d = grids.d_grid[di];
      if (!ok || d < 1 || d > dim) {
        for (auto& cell : out.rmse_sum[di][ji]) cell = kInf;
        continue;
      }
      Matrix basis;
      if (method == SdrMethod::rcls) {
        basis = spectrum.eigenvectors.leftCols(d);
      } else {
        basis = numkit::orthonormalize(wd->whitener * spectrum.eigenvectors.leftCols(d));
      }
      const Matrix u_train = train_f.x * basis;
      const Matrix u_val = val.x * basis;
      const auto sq = knn_sq_err(u_train, train_f.y, u_val, val.y, grids.k_grid);
      for (std::size_t ki = 0; ki < grids.k_grid.size(); ++ki) {
        out.rmse_sum[di][ji][ki] += std::sqrt(sq[ki] / static_cast<double>(val.n()));
      }
    }
  }
}

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

CvGrids resolve_grids(const CvGrids& grids, Eigen::Index dim) {
  CvGrids g = grids;
  if (g.d_grid.empty()) g.d_grid = range_grid(1, static_cast<int>(std::min<Eigen::Index>(dim, 12)));
  if (g.k_grid.empty()) g.k_grid = range_grid(1, 30);
  if (g.j_grid.empty()) g.j_grid = range_grid(2, 30);
  sort_unique(g.d_grid);
  sort_unique(g.k_grid);
  sort_unique(g.j_grid);
  return g;
}

// Fold-averaged validation RMSE per k for plain kNN on raw coordinates;
// returns the minimizing k (ties toward the smaller one).
int crossvalidate_knn_k(const Dataset& train, const std::vector<int>& k_grid, int folds,
                        std::uint64_t seed) {
  std::vector<double> acc(k_grid.size(), 0.0);
  const auto fold_sets = kfold_indices(train.n(), folds, seed);
  for (const auto& fold : fold_sets) {
    std::vector<char> in_fold(static_cast<std::size_t>(train.n()), 0);
    for (const auto idx : fold) in_fold[static_cast<std::size_t>(idx)] = 1;
    std::vector<Eigen::Index> train_rows;
    for (Eigen::Index i = 0; i < train.n(); ++i) {
      if (!in_fold[static_cast<std::size_t>(i)]) train_rows.push_back(i);
    }
    const Dataset train_f = subset(train, train_rows);
    const Dataset val = subset(train, fold);
    const auto sq = knn_sq_err(train_f.x, train_f.y, val.x, val.y, k_grid);
    for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
      acc[ki] += std::sqrt(sq[ki] / static_cast<double>(val.n()));
    }
  }
  std::size_t best = 0;
  for (std::size_t ki = 1; ki < k_grid.size(); ++ki) {
    if (acc[ki] < acc[best]) best = ki;
  }
  if (!std::isfinite(acc[best])) {
    throw std::runtime_error("plain kNN cross-validation: no usable k in the grid");
  }
  return k_grid[best];
}

nlohmann::json grids_to_json(const CvGrids& g) {
  return nlohmann::json{{"d", g.d_grid}, {"J", g.j_grid}, {"k", g.k_grid}};
}

std::string link_list(const std::vector<LinkId>& links) {
  std::string s;
  for (const auto l : links) {
    if (!s.empty()) s += ",";
    s += to_string(l);
  }
  return s;
}

nlohmann::json finish_metadata(nlohmann::json config_echo, std::uint64_t seed, double wall_s) {
  nlohmann::json meta;
  meta["config"] = std::move(config_echo);
  meta["config_hash"] = fnv1a(meta["config"].dump());
  meta["master_seed"] = seed;
  meta["wall_time_s"] = wall_s;
  meta["timestamp"] = timestamp_utc();
  meta["threads"] = max_threads();
  return meta;
}

}  // namespace

ExperimentReport run_rate_experiment(const RateConfig& config) {
  if (config.methods.empty() || config.links.empty() || config.n_grid.empty() ||
      config.repetitions < 1) {
    throw std::invalid_argument("rate experiment: methods, links, N grid and repetitions required");
  }
  const std::vector<int> j_grid = config.j_grid.empty() ? range_grid(2, 40) : config.j_grid;
  Timer timer;

  ExperimentReport report;
  report.runs.columns = {"method", "link", "N", "rep", "seed", "J", "d", "frobenius_error"};
  report.summary.columns = {"method", "link", "N", "J", "d", "err_mean", "err_std", "slope"};

  struct SummaryCell {
    SdrMethod method;
    LinkId link;
    Eigen::Index n;
    int best_j;
    int d;
    double mean;
    double std;
  };
  std::vector<SummaryCell> cells;

  for (const LinkId link : config.links) {
    const int d = link_intrinsic_dim(link);
    const std::uint64_t seed_link = derive_seed(config.seed, static_cast<std::uint64_t>(link));
    for (const Eigen::Index n : config.n_grid) {
      const std::uint64_t seed_n = derive_seed(seed_link, static_cast<std::uint64_t>(n));
      // errs[method][j][rep]
      std::vector<std::vector<std::vector<double>>> errs(
          config.methods.size(),
          std::vector<std::vector<double>>(j_grid.size(),
                                           std::vector<double>(config.repetitions, 0.0)));
      std::vector<std::uint64_t> rep_seeds(config.repetitions);

      for_each_index(config.exec, config.repetitions, [&](std::int64_t rep) {
        const std::uint64_t seed_rep = derive_seed(seed_n, static_cast<std::uint64_t>(rep));
        rep_seeds[static_cast<std::size_t>(rep)] = seed_rep;
        SyntheticSpec spec;
        spec.link = link;
        spec.dim_ambient = config.dim_ambient;
        spec.n = n;
        spec.noise_ratio = config.noise_ratio;
        spec.seed = seed_rep;
        const SyntheticData data = synth_dataset(spec);

        const bool needs_whitening = std::any_of(
            config.methods.begin(), config.methods.end(),
            [](SdrMethod m) { return m != SdrMethod::rcls; });
        std::optional<baselines::WhitenedData> wd;
        if (needs_whitening) wd = baselines::whiten(data.data, config.rtol);

        // phd ignores J: fit once, copy across the grid.
        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
          if (config.methods[mi] != SdrMethod::phd) continue;
          const auto est = estimate_from_candidate(
              SdrMethod::phd, baselines::phd_candidate(wd->z, data.data.y), *wd, 0, d,
              config.rtol);
          const double err =
              metrics::projection_error(est.projector, data.true_projector).frobenius;
          for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
            errs[mi][ji][static_cast<std::size_t>(rep)] = err;
          }
        }

        for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
          const int j = j_grid[ji];
          const auto part = dyadic_partition(data.data.y, j);
          const auto assign = assign_level_sets(data.data, part);
          std::optional<std::vector<baselines::SliceMoments>> moments;
          for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
            const SdrMethod method = config.methods[mi];
            if (method == SdrMethod::phd) continue;
            double err = kInf;
            try {
              Matrix projector;
              if (method == SdrMethod::rcls) {
                const auto model = rcls::rcls_projector_with_assignment(
                    data.data, part, assign, d, config.rtol, Exec::serial);
                projector = model.projector;
              } else {
                if (!moments) {
                  moments = baselines::slice_moments(wd->z, assign, Exec::serial);
                }
                const Matrix lambda = baselines::candidate_from_moments(
                    method, *moments, data.data.dim(), Exec::serial);
                projector =
                    estimate_from_candidate(method, lambda, *wd, j, d, config.rtol).projector;
              }
              err = metrics::projection_error(projector, data.true_projector).frobenius;
            } catch (const std::exception&) {
              // degenerate fit at this J; leave it uncompetitive
            }
            errs[mi][ji][static_cast<std::size_t>(rep)] = err;
          }
        }
      });

      for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        const SdrMethod method = config.methods[mi];
        // Oracle J: grid value minimizing the mean error over repetitions.
        std::size_t best_ji = 0;
        double best_mean = kInf;
        for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
          const auto [mean, sd] = mean_std(errs[mi][ji]);
          if (mean < best_mean) {
            best_mean = mean;
            best_ji = ji;
          }
        }
        const int j_report = method == SdrMethod::phd ? 0 : j_grid[best_ji];
        for (int rep = 0; rep < config.repetitions; ++rep) {
          report.runs.add_row({to_string(method), to_string(link), format_number(static_cast<std::int64_t>(n)),
                               format_number(static_cast<std::int64_t>(rep)),
                               format_number(static_cast<std::int64_t>(rep_seeds[static_cast<std::size_t>(rep)])),
                               format_number(static_cast<std::int64_t>(j_report)),
                               format_number(static_cast<std::int64_t>(d)),
                               format_number(errs[mi][best_ji][static_cast<std::size_t>(rep)])});
        }
        const auto [mean, sd] = mean_std(errs[mi][best_ji]);
        cells.push_back({method, link, n, j_report, d, mean, sd});
      }
    }
  }

  // Slope per (method, link) over the N grid, appended to every summary row
  // of that curve.
  for (const LinkId link : config.links) {
    for (const SdrMethod method : config.methods) {
      std::vector<double> ns, means;
      for (const auto& c : cells) {
        if (c.method == method && c.link == link && c.mean > 0.0 &&
            std::isfinite(c.mean)) {
          ns.push_back(static_cast<double>(c.n));
          means.push_back(c.mean);
        }
      }
      double slope = std::numeric_limits<double>::quiet_NaN();
      if (ns.size() >= 2) slope = metrics::loglog_slope(ns, means);
      for (const auto& c : cells) {
        if (c.method != method || c.link != link) continue;
        report.summary.add_row({to_string(method), to_string(link),
                                format_number(static_cast<std::int64_t>(c.n)),
                                format_number(static_cast<std::int64_t>(c.best_j)),
                                format_number(static_cast<std::int64_t>(c.d)),
                                format_number(c.mean), format_number(c.std),
                                format_number(slope)});
      }
    }
  }

  nlohmann::json echo;
  echo["driver"] = "rates";
  echo["links"] = link_list(config.links);
  {
    std::vector<std::string> ms;
    for (const auto m : config.methods) ms.push_back(to_string(m));
    echo["methods"] = ms;
  }
  echo["n_grid"] = config.n_grid;
  echo["j_grid"] = j_grid;
  echo["D"] = config.dim_ambient;
  echo["noise_ratio"] = config.noise_ratio;
  echo["repetitions"] = config.repetitions;
  echo["rtol"] = config.rtol;
  report.metadata = finish_metadata(std::move(echo), config.seed, timer.seconds());
  return report;
}

ExperimentReport run_proxy_scan(const ProxyScanConfig& config) {
  if (config.repetitions < 1 || config.n < 4) {
    throw std::invalid_argument("proxy scan: need repetitions >= 1 and N >= 4");
  }
  const std::vector<int> j_grid = config.j_grid.empty() ? range_grid(2, 40) : config.j_grid;
  const int d = link_intrinsic_dim(config.link);
  Timer timer;

  // [j][rep]
  std::vector<std::vector<double>> true_err(j_grid.size(),
                                            std::vector<double>(config.repetitions, 0.0));
  auto proxy_plain = true_err, proxy_log = true_err, gamma = true_err;
  std::vector<std::vector<int>> included(j_grid.size(),
                                         std::vector<int>(config.repetitions, 0));
  std::vector<std::vector<bool>> valid(j_grid.size(),
                                       std::vector<bool>(config.repetitions, false));
  std::vector<std::uint64_t> rep_seeds(config.repetitions);

  for_each_index(config.exec, config.repetitions, [&](std::int64_t rep) {
    const std::uint64_t seed_rep = derive_seed(config.seed, static_cast<std::uint64_t>(rep));
    rep_seeds[static_cast<std::size_t>(rep)] = seed_rep;
    SyntheticSpec spec;
    spec.link = config.link;
    spec.dim_ambient = config.dim_ambient;
    spec.n = config.n;
    spec.noise_ratio = config.noise_ratio;
    spec.seed = seed_rep;
    const SyntheticData data = synth_dataset(spec);

    for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
      try {
        const auto model =
            rcls::rcls_projector(data.data, j_grid[ji], d, config.rtol, Exec::serial);
        const auto rep_report = proxy::proxy_report_from_model(model, d);
        true_err[ji][static_cast<std::size_t>(rep)] =
            metrics::projection_error(model.projector, data.true_projector).frobenius;
        proxy_plain[ji][static_cast<std::size_t>(rep)] = rep_report.proxy_value;
        proxy_log[ji][static_cast<std::size_t>(rep)] = rep_report.proxy_value_logfactor;
        gamma[ji][static_cast<std::size_t>(rep)] = rep_report.gamma_hat;
        included[ji][static_cast<std::size_t>(rep)] = rep_report.n_included;
        valid[ji][static_cast<std::size_t>(rep)] = rep_report.valid;
      } catch (const std::exception&) {
        // keep the invalid placeholder
      }
    }
  });

  ExperimentReport report;
  report.runs.columns = {"rep",   "seed",  "J",         "valid",     "true_error",
                         "proxy", "proxy_logfactor", "gamma_hat", "n_included"};
  for (int rep = 0; rep < config.repetitions; ++rep) {
    for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
      report.runs.add_row(
          {format_number(static_cast<std::int64_t>(rep)),
           format_number(static_cast<std::int64_t>(rep_seeds[static_cast<std::size_t>(rep)])),
           format_number(static_cast<std::int64_t>(j_grid[ji])),
           valid[ji][static_cast<std::size_t>(rep)] ? "1" : "0",
           format_number(true_err[ji][static_cast<std::size_t>(rep)]),
           format_number(proxy_plain[ji][static_cast<std::size_t>(rep)]),
           format_number(proxy_log[ji][static_cast<std::size_t>(rep)]),
           format_number(gamma[ji][static_cast<std::size_t>(rep)]),
           format_number(static_cast<std::int64_t>(included[ji][static_cast<std::size_t>(rep)]))});
    }
  }

  std::vector<double> true_means, plain_means, log_means;
  for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
    true_means.push_back(mean_std(true_err[ji]).first);
    plain_means.push_back(mean_std(proxy_plain[ji]).first);
    log_means.push_back(mean_std(proxy_log[ji]).first);
  }

  // Display rescaling pins the curves together at J = d (or at the smallest
  // grid value when d is not in the grid); raw values stay untouched.
  std::size_t ref = 0;
  for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
    if (j_grid[ji] == d) {
      ref = ji;
      break;
    }
  }
  const double plain_factor =
      plain_means[ref] > 0.0 ? true_means[ref] / plain_means[ref] : 1.0;
  const double log_factor = log_means[ref] > 0.0 ? true_means[ref] / log_means[ref] : 1.0;

  report.summary.columns = {"J",          "true_mean",  "true_std",
                            "proxy_mean", "proxy_std",  "proxy_logfactor_mean",
                            "proxy_logfactor_std",      "proxy_rescaled",
                            "proxy_logfactor_rescaled"};
  for (std::size_t ji = 0; ji < j_grid.size(); ++ji) {
    const auto [tm, ts] = mean_std(true_err[ji]);
    const auto [pm, ps] = mean_std(proxy_plain[ji]);
    const auto [lm, ls] = mean_std(proxy_log[ji]);
    report.summary.add_row({format_number(static_cast<std::int64_t>(j_grid[ji])),
                            format_number(tm), format_number(ts), format_number(pm),
                            format_number(ps), format_number(lm), format_number(ls),
                            format_number(pm * plain_factor), format_number(lm * log_factor)});
  }

  const double spearman_plain = metrics::spearman(plain_means, true_means);
  const double spearman_logfactor = metrics::spearman(log_means, true_means);

  nlohmann::json echo;
  echo["driver"] = "proxy";
  echo["link"] = to_string(config.link);
  echo["D"] = config.dim_ambient;
  echo["N"] = config.n;
  echo["j_grid"] = j_grid;
  echo["noise_ratio"] = config.noise_ratio;
  echo["repetitions"] = config.repetitions;
  echo["rtol"] = config.rtol;
  report.metadata = finish_metadata(std::move(echo), config.seed, timer.seconds());
  report.metadata["spearman_proxy_vs_error"] = spearman_plain;
  report.metadata["spearman_proxy_logfactor_vs_error"] = spearman_logfactor;
  report.metadata["rescale_reference_J"] = j_grid[ref];
  return report;
}

CvSelection crossvalidate(const Dataset& train, SdrMethod method, const CvGrids& grids_in,
                          int folds, std::uint64_t seed, double rtol, Exec exec) {
  const CvGrids grids = resolve_grids(grids_in, train.dim());
  if (grids.d_grid.empty() || grids.j_grid.empty() || grids.k_grid.empty()) {
    throw std::invalid_argument("crossvalidate: empty hyperparameter grid");
  }
  const bool is_phd = method == SdrMethod::phd;
  const std::size_t n_j = is_phd ? 1 : grids.j_grid.size();

  SweepResult sweep;
  sweep.rmse_sum.assign(
      grids.d_grid.size(),
      std::vector<std::vector<double>>(n_j, std::vector<double>(grids.k_grid.size(), 0.0)));

  const auto fold_sets = kfold_indices(train.n(), folds, seed);
  for (const auto& fold : fold_sets) {
    std::vector<char> in_fold(static_cast<std::size_t>(train.n()), 0);
    for (const auto idx : fold) in_fold[static_cast<std::size_t>(idx)] = 1;
    std::vector<Eigen::Index> train_rows;
    for (Eigen::Index i = 0; i < train.n(); ++i) {
      if (!in_fold[static_cast<std::size_t>(i)]) train_rows.push_back(i);
    }
    const Dataset train_f = subset(train, train_rows);
    const Dataset val = subset(train, fold);
    accumulate_fold(sweep, train_f, val, method, grids, rtol, exec);
  }

  CvSelection best;
  best.mean_rmse = kInf;
  bool found = false;
  for (std::size_t di = 0; di < grids.d_grid.size(); ++di) {
    for (std::size_t ji = 0; ji < n_j; ++ji) {
      for (std::size_t ki = 0; ki < grids.k_grid.size(); ++ki) {
        const double mean = sweep.rmse_sum[di][ji][ki] / static_cast<double>(folds);
        if (mean < best.mean_rmse) {
          best.mean_rmse = mean;
          best.d = grids.d_grid[di];
          best.j = is_phd ? 0 : grids.j_grid[ji];
          best.k = grids.k_grid[ki];
          found = true;
        }
      }
    }
  }
  if (!found) {
    throw std::runtime_error("crossvalidate: no grid point produced a finite validation error");
  }
  return best;
}

ExperimentReport run_realdata_benchmark(const BenchConfig& config) {
  Dataset raw = load_csv(config.csv_path, config.response_column);
  return run_realdata_benchmark(config, raw);
}

ExperimentReport run_realdata_benchmark(const BenchConfig& config, const Dataset& raw) {
  if (config.repetitions < 1) {
    throw std::invalid_argument("benchmark: repetitions must be >= 1");
  }
  Timer timer;
  Dataset ds = raw;
  if (config.log_transform) ds = log_transform_response(ds, config.log_offset);
  if (config.standardize) ds = standardize_features(ds).first;
  const CvGrids grids = resolve_grids(config.grids, ds.dim());
  const std::string label =
      config.dataset_label.empty()
          ? (config.csv_path.empty() ? "inline" : config.csv_path)
          : config.dataset_label;

  struct MethodOutcome {
    double rmse = 0.0;
    double d = -1.0, j = -1.0, k = -1.0;  // negative: not applicable
  };
  struct RepOutcome {
    std::uint64_t seed = 0;
    std::vector<MethodOutcome> per_method;  // entries follow `labels` below
  };

  std::vector<std::string> labels;
  if (config.include_linreg) labels.push_back("LinReg");
  if (config.include_knn) labels.push_back("KNN");
  for (const auto m : config.methods) labels.push_back(to_string(m));

  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(config.repetitions));

  for_each_index(config.exec, config.repetitions, [&](std::int64_t rep) {
    RepOutcome out;
    out.seed = derive_seed(config.seed, static_cast<std::uint64_t>(rep));
    const auto [train, test] = split_train_test(ds, config.test_fraction, out.seed);
    const std::uint64_t cv_seed = derive_seed(out.seed, 0x7f4a7c15ULL);

    if (config.include_linreg) {
      Matrix design(train.n(), train.dim() + 1);
      design.col(0).setOnes();
      design.rightCols(train.dim()) = train.x;
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(design);
      const Vector coef = cod.solve(train.y);
      Matrix test_design(test.n(), test.dim() + 1);
      test_design.col(0).setOnes();
      test_design.rightCols(test.dim()) = test.x;
      MethodOutcome mo;
      mo.rmse = metrics::rmse(test_design * coef, test.y);
      out.per_method.push_back(mo);
    }

    if (config.include_knn) {
      // Plain kNN: raw coordinates, cross-validated k only.
      const int k = crossvalidate_knn_k(train, grids.k_grid, config.folds, cv_seed);
      const Matrix identity = Matrix::Identity(ds.dim(), ds.dim());
      MethodOutcome mo;
      mo.k = k;
      mo.rmse = knn_test_rmse(identity, train, test, k);
      out.per_method.push_back(mo);
    }

    // With proxy J selection, the scan pins one J per candidate d on the
    // training set; cross-validation then only searches (d, k).
    std::vector<int> proxy_j_of_d;
    if (config.j_selection == JSelection::proxy) {
      for (const int d : grids.d_grid) {
        const auto scan = proxy::proxy_scan(train, grids.j_grid, d, config.rtol, Exec::serial);
        int best_j = grids.j_grid.front();
        double best = kInf;
        for (const auto& r : scan) {
          if (r.valid && r.proxy_value < best) {
            best = r.proxy_value;
            best_j = r.j;
          }
        }
        proxy_j_of_d.push_back(best_j);
      }
    }

    for (const SdrMethod method : config.methods) {
      CvSelection sel;
      if (config.j_selection == JSelection::proxy && method != SdrMethod::phd) {
        sel.mean_rmse = kInf;
        for (std::size_t di = 0; di < grids.d_grid.size(); ++di) {
          CvGrids pinned = grids;
          pinned.d_grid = {grids.d_grid[di]};
          pinned.j_grid = {proxy_j_of_d[di]};
          const auto cand = crossvalidate(train, method, pinned, config.folds, cv_seed,
                                          config.rtol, Exec::serial);
          if (cand.mean_rmse < sel.mean_rmse) sel = cand;
        }
      } else {
        sel = crossvalidate(train, method, grids, config.folds, cv_seed, config.rtol,
                            Exec::serial);
      }
      const auto est = fit_index_space(train, method, std::max(sel.j, 1), sel.d, config.rtol,
                                       Exec::serial);
      MethodOutcome mo;
      mo.d = sel.d;
      mo.k = sel.k;
      mo.j = method == SdrMethod::phd ? -1.0 : sel.j;
      mo.rmse = knn_test_rmse(est.basis, train, test, sel.k);
      out.per_method.push_back(mo);
    }
    outcomes[static_cast<std::size_t>(rep)] = std::move(out);
  });

  ExperimentReport report;
  report.runs.columns = {"method", "dataset", "rep", "seed", "d", "J", "k", "test_rmse"};
  report.summary.columns = {"method", "rmse_mean", "rmse_std", "d_mean", "k_mean", "J_mean"};

  auto cell = [](double v) { return v < 0.0 ? std::string{} : format_number(v); };

  for (std::size_t li = 0; li < labels.size(); ++li) {
    std::vector<double> rmses, ds_sel, ks_sel, js_sel;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const auto& mo = outcomes[static_cast<std::size_t>(rep)].per_method[li];
      report.runs.add_row({labels[li], label, format_number(static_cast<std::int64_t>(rep)),
                           format_number(static_cast<std::int64_t>(
                               outcomes[static_cast<std::size_t>(rep)].seed)),
                           cell(mo.d), cell(mo.j), cell(mo.k), format_number(mo.rmse)});
      rmses.push_back(mo.rmse);
      if (mo.d >= 0) ds_sel.push_back(mo.d);
      if (mo.k >= 0) ks_sel.push_back(mo.k);
      if (mo.j >= 0) js_sel.push_back(mo.j);
    }
    const auto [rm, rs] = mean_std(rmses);
    report.summary.add_row({labels[li], format_number(rm), format_number(rs),
                            ds_sel.empty() ? std::string{} : format_number(mean_std(ds_sel).first),
                            ks_sel.empty() ? std::string{} : format_number(mean_std(ks_sel).first),
                            js_sel.empty() ? std::string{} : format_number(mean_std(js_sel).first)});
  }

  nlohmann::json echo;
  echo["driver"] = "bench";
  echo["csv_path"] = config.csv_path;
  echo["dataset"] = label;
  echo["response_column"] = config.response_column;
  echo["standardize"] = config.standardize;
  echo["log_transform"] = config.log_transform;
  echo["log_offset"] = config.log_offset;
  {
    std::vector<std::string> ms;
    for (const auto m : config.methods) ms.push_back(to_string(m));
    echo["methods"] = ms;
  }
  echo["include_linreg"] = config.include_linreg;
  echo["include_knn"] = config.include_knn;
  echo["grids"] = grids_to_json(grids);
  echo["folds"] = config.folds;
  echo["test_fraction"] = config.test_fraction;
  echo["repetitions"] = config.repetitions;
  echo["rtol"] = config.rtol;
  echo["j_selection"] = config.j_selection == JSelection::proxy ? "proxy" : "cv";
  report.metadata = finish_metadata(std::move(echo), config.seed, timer.seconds());
  return report;
}

}  // namespace sdr::harness
