#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdr/baselines.hpp"
#include "sdr/dataset.hpp"
#include "sdr/parallel.hpp"
#include "sdr/report.hpp"
#include "sdr/synthetic.hpp"

namespace sdr::harness {

// Monte Carlo comparison of projection errors against sample size. For every
// (method, link, N) the level-set count J is tuned by oracle: the grid value
// minimizing the mean error over the repetitions. Repetitions run in
// parallel, each on its own child-seeded generator.
struct RateConfig {
  std::vector<SdrMethod> methods{SdrMethod::rcls, SdrMethod::sir, SdrMethod::sir2,
                                 SdrMethod::save, SdrMethod::dr,  SdrMethod::phd};
  std::vector<LinkId> links{LinkId::a};
  std::vector<Eigen::Index> n_grid{2000, 4000, 8000, 16000, 32000};
  std::vector<int> j_grid;  // empty -> 2..40
  int dim_ambient = 20;
  double noise_ratio = 0.01;
  int repetitions = 20;
  std::uint64_t seed = 0;
  double rtol = numkit::kDefaultRtol;
  Exec exec = Exec::parallel;
};

ExperimentReport run_rate_experiment(const RateConfig& config);

// Level-set-count scan on one synthetic problem: true projection error next
// to both diagnostic variants per J, with rank correlations in the metadata.
struct ProxyScanConfig {
  LinkId link = LinkId::b;
  int dim_ambient = 20;
  Eigen::Index n = 20000;
  std::vector<int> j_grid;  // empty -> 2..40
  double noise_ratio = 0.01;
  int repetitions = 10;
  std::uint64_t seed = 0;
  double rtol = numkit::kDefaultRtol;
  Exec exec = Exec::parallel;
};

ExperimentReport run_proxy_scan(const ProxyScanConfig& config);

// Hyperparameter grids for the cross-validated pipeline. Empty grids fall
// back to d in 1..min(D,12), k in 1..30, J in 2..30.
struct CvGrids {
  std::vector<int> d_grid;
  std::vector<int> j_grid;
  std::vector<int> k_grid;
};

struct CvSelection {
  int d = 1;
  int j = 0;  // 0 when the method takes no J
  int k = 1;
  double mean_rmse = 0.0;
};

// Mean validation RMSE over k folds for every (d, J, k) grid point; returns
// the minimizer, ties resolved toward the lexicographically smallest
// (d, J, k).
CvSelection crossvalidate(const Dataset& train, SdrMethod method, const CvGrids& grids,
                          int folds, std::uint64_t seed, double rtol = numkit::kDefaultRtol,
                          Exec exec = Exec::parallel);

// How the level-set count is tuned in the real-data pipeline: jointly
// cross-validated with (d, k), or pinned per candidate d by the
// error-factor diagnostic scan before cross-validating (d, k).
enum class JSelection { cv, proxy };

// Train/test benchmark of the full pipeline (index estimate + projected kNN)
// against linear regression and plain kNN.
struct BenchConfig {
  std::string csv_path;
  std::string response_column = "y";
  bool standardize = true;
  bool log_transform = false;
  double log_offset = 0.0;
  std::vector<SdrMethod> methods{SdrMethod::phd, SdrMethod::sir, SdrMethod::sir2,
                                 SdrMethod::save, SdrMethod::dr, SdrMethod::rcls};
  bool include_linreg = true;
  bool include_knn = true;
  CvGrids grids;
  int folds = 10;
  double test_fraction = 0.15;
  int repetitions = 20;
  std::uint64_t seed = 0;
  double rtol = numkit::kDefaultRtol;
  Exec exec = Exec::parallel;
  JSelection j_selection = JSelection::cv;
  std::string dataset_label;  // defaults to the CSV path
};

ExperimentReport run_realdata_benchmark(const BenchConfig& config);
// Variant taking an already-loaded (raw, un-preprocessed) dataset.
ExperimentReport run_realdata_benchmark(const BenchConfig& config, const Dataset& raw);

}  // namespace sdr::harness
