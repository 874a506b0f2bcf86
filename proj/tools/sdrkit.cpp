// Command-line driver for the dimension-reduction toolkit: synthetic data
// generation, index-space estimation, level-set-count scans, rate
// experiments, the cross-validated real-data pipeline, and projected
// regression. Every subcommand reads one JSON config document; outputs are
// CSV tables plus a JSON metadata sidecar.

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdr/baselines.hpp"
#include "sdr/experiments.hpp"
#include "sdr/knn.hpp"
#include "sdr/metrics.hpp"
#include "sdr/piecewise_poly.hpp"
#include "sdr/proxy.hpp"
#include "sdr/rcls.hpp"
#include "sdr/report.hpp"
#include "sdr/serialize.hpp"
#include "sdr/synthetic.hpp"

using nlohmann::json;

namespace {

json load_config(const std::string& path) { return sdr::serialize::load_json_file(path); }

template <typename T>
T get_or(const json& cfg, const std::string& key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  return cfg.at(key).get<T>();
}

template <typename T>
T require(const json& cfg, const std::string& key) {
  if (!cfg.contains(key)) {
    throw std::runtime_error("config is missing required field '" + key + "'");
  }
  return cfg.at(key).get<T>();
}

sdr::Dataset load_dataset(const json& cfg, const std::string& csv_key = "csv") {
  const auto path = require<std::string>(cfg, csv_key);
  if (!cfg.contains("response")) return sdr::load_csv(path, std::string("y"));
  const auto& resp = cfg.at("response");
  if (resp.is_number_integer()) return sdr::load_csv(path, resp.get<int>());
  return sdr::load_csv(path, resp.get<std::string>());
}

sdr::Dataset preprocess(const json& cfg, sdr::Dataset ds) {
  if (get_or(cfg, "log_transform", false)) {
    ds = sdr::log_transform_response(ds, get_or(cfg, "log_offset", 0.0));
  }
  if (get_or(cfg, "standardize", false)) {
    ds = sdr::standardize_features(ds).first;
  }
  return ds;
}

std::vector<int> parse_int_grid(const json& cfg, const std::string& key, int lo, int hi) {
  if (cfg.contains(key)) return cfg.at(key).get<std::vector<int>>();
  std::vector<int> grid;
  for (int v = lo; v <= hi; ++v) grid.push_back(v);
  return grid;
}

sdr::Exec exec_of(const json& cfg) {
  return get_or(cfg, "serial", false) ? sdr::Exec::serial : sdr::Exec::parallel;
}

int cmd_synth(const std::string& config_path) {
  const json cfg = load_config(config_path);
  sdr::harness::SyntheticSpec spec;
  spec.link = sdr::harness::link_from_string(get_or<std::string>(cfg, "link", "a"));
  spec.dim_ambient = get_or(cfg, "D", 20);
  spec.n = require<std::int64_t>(cfg, "N");
  spec.noise_ratio = get_or(cfg, "noise_ratio", 0.01);
  spec.seed = get_or<std::uint64_t>(cfg, "seed", 0);
  const auto data = sdr::harness::synth_dataset(spec);

  const auto out_csv = require<std::string>(cfg, "out_csv");
  sdr::save_csv(data.data, out_csv);
  if (cfg.contains("basis_out")) {
    sdr::serialize::write_basis_json(cfg.at("basis_out").get<std::string>(), data.true_basis);
  }
  std::cout << "wrote " << data.data.n() << " rows, D=" << data.data.dim() << " to " << out_csv
            << "\n";
  return 0;
}

int cmd_estimate(const std::string& config_path) {
  const json cfg = load_config(config_path);
  const sdr::Dataset ds = preprocess(cfg, load_dataset(cfg));
  const auto method = sdr::method_from_string(get_or<std::string>(cfg, "method", "RCLS"));
  const int j = get_or(cfg, "J", 8);
  const double rtol = get_or(cfg, "rtol", sdr::numkit::kDefaultRtol);
  int d = get_or(cfg, "d", 0);

  auto est = sdr::fit_index_space(ds, method, j, d > 0 ? d : 1, rtol, exec_of(cfg));
  if (d <= 0) {
    const int suggested = sdr::rcls::suggest_dim(est.spectrum);
    if (suggested < 1) {
      throw std::runtime_error("spectrum is numerically zero; cannot suggest a dimension");
    }
    if (suggested != est.d_tilde) {
      est = sdr::fit_index_space(ds, method, j, suggested, rtol, exec_of(cfg));
    }
    d = suggested;
  }

  json out;
  if (method == sdr::SdrMethod::rcls) {
    const auto model = sdr::rcls::rcls_projector(ds, j, d, rtol, exec_of(cfg));
    out = sdr::serialize::model_to_json(model);
  } else {
    out = sdr::serialize::model_to_json(est);
  }
  const auto model_out = require<std::string>(cfg, "model_out");
  sdr::serialize::write_json_file(model_out, out);

  json info;
  info["method"] = sdr::to_string(method);
  info["J"] = est.j;
  info["d"] = d;
  info["rank_deficient"] = est.rank_deficient;
  if (cfg.contains("true_basis")) {
    const auto basis = sdr::serialize::read_basis_json(cfg.at("true_basis").get<std::string>());
    const auto truth = sdr::numkit::projector_from_basis(basis);
    const auto err = sdr::metrics::projection_error(est.projector, truth);
    info["frobenius_error"] = err.frobenius;
    info["spectral_error"] = err.spectral;
    info["largest_principal_angle"] = err.largest_principal_angle;
    std::cout << "frobenius_error=" << err.frobenius << " spectral=" << err.spectral << "\n";
  }
  if (cfg.contains("report_out")) {
    sdr::serialize::write_json_file(cfg.at("report_out").get<std::string>(), info);
  }
  std::cout << "model written to " << model_out << "\n";
  return 0;
}

int cmd_proxy(const std::string& config_path) {
  const json cfg = load_config(config_path);
  const sdr::Dataset ds = preprocess(cfg, load_dataset(cfg));
  const int d = require<int>(cfg, "d");
  const auto grid = parse_int_grid(cfg, "j_grid", get_or(cfg, "j_min", 2), get_or(cfg, "j_max", 40));
  const double rtol = get_or(cfg, "rtol", sdr::numkit::kDefaultRtol);
  const auto reports = sdr::proxy::proxy_scan(ds, grid, d, rtol, exec_of(cfg));
  const auto out_csv = require<std::string>(cfg, "out_csv");
  sdr::proxy::write_proxy_scan_csv(out_csv, reports);

  int best_j = 0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    if (r.valid && r.proxy_value < best) {
      best = r.proxy_value;
      best_j = r.j;
    }
  }
  std::cout << "scan written to " << out_csv << "; proxy-minimizing J = " << best_j << "\n";
  return 0;
}

int cmd_rates(const std::string& config_path, const std::string& out_prefix_flag) {
  const json cfg = load_config(config_path);
  sdr::harness::RateConfig config;
  if (cfg.contains("methods")) {
    config.methods.clear();
    for (const auto& m : cfg.at("methods")) {
      config.methods.push_back(sdr::method_from_string(m.get<std::string>()));
    }
  }
  if (cfg.contains("links")) {
    config.links.clear();
    for (const auto& l : cfg.at("links")) {
      config.links.push_back(sdr::harness::link_from_string(l.get<std::string>()));
    }
  }
  if (cfg.contains("n_grid")) {
    config.n_grid.clear();
    for (const auto& n : cfg.at("n_grid")) config.n_grid.push_back(n.get<std::int64_t>());
  }
  config.j_grid = parse_int_grid(cfg, "j_grid", get_or(cfg, "j_min", 2), get_or(cfg, "j_max", 40));
  config.dim_ambient = get_or(cfg, "D", 20);
  config.noise_ratio = get_or(cfg, "noise_ratio", 0.01);
  config.repetitions = get_or(cfg, "repetitions", 20);
  config.seed = get_or<std::uint64_t>(cfg, "seed", 0);
  config.rtol = get_or(cfg, "rtol", sdr::numkit::kDefaultRtol);
  config.exec = exec_of(cfg);

  const auto report = sdr::harness::run_rate_experiment(config);
  const auto prefix =
      out_prefix_flag.empty() ? get_or<std::string>(cfg, "out_prefix", "rates") : out_prefix_flag;
  report.write(prefix);
  std::cout << report.summary.to_csv();
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_prefix_flag) {
  const json cfg = load_config(config_path);
  sdr::harness::BenchConfig config;
  config.csv_path = require<std::string>(cfg, "csv");
  const sdr::Dataset raw = load_dataset(cfg);  // response by name or index
  config.standardize = get_or(cfg, "standardize", true);
  config.log_transform = get_or(cfg, "log_transform", false);
  config.log_offset = get_or(cfg, "log_offset", 0.0);
  if (cfg.contains("methods")) {
    config.methods.clear();
    for (const auto& m : cfg.at("methods")) {
      config.methods.push_back(sdr::method_from_string(m.get<std::string>()));
    }
  }
  config.include_linreg = get_or(cfg, "include_linreg", true);
  config.include_knn = get_or(cfg, "include_knn", true);
  if (cfg.contains("d_grid")) config.grids.d_grid = cfg.at("d_grid").get<std::vector<int>>();
  if (cfg.contains("j_grid")) config.grids.j_grid = cfg.at("j_grid").get<std::vector<int>>();
  if (cfg.contains("k_grid")) config.grids.k_grid = cfg.at("k_grid").get<std::vector<int>>();
  config.folds = get_or(cfg, "folds", 10);
  config.test_fraction = get_or(cfg, "test_fraction", 0.15);
  config.repetitions = get_or(cfg, "repetitions", 20);
  config.seed = get_or<std::uint64_t>(cfg, "seed", 0);
  config.rtol = get_or(cfg, "rtol", sdr::numkit::kDefaultRtol);
  config.exec = exec_of(cfg);
  const auto j_sel = get_or<std::string>(cfg, "j_selection", "cv");
  if (j_sel == "proxy") {
    config.j_selection = sdr::harness::JSelection::proxy;
  } else if (j_sel != "cv") {
    throw std::runtime_error("j_selection must be 'cv' or 'proxy'");
  }
  config.dataset_label = get_or<std::string>(cfg, "dataset_label", "");

  const auto report = sdr::harness::run_realdata_benchmark(config, raw);
  const auto prefix =
      out_prefix_flag.empty() ? get_or<std::string>(cfg, "out_prefix", "bench") : out_prefix_flag;
  report.write(prefix);
  std::cout << report.summary.to_csv();
  return 0;
}

Eigen::MatrixXd projector_from_config(const json& cfg, Eigen::Index dim) {
  if (!cfg.contains("projector") || cfg.at("projector") == "identity") {
    return Eigen::MatrixXd::Identity(dim, dim);
  }
  const auto& pj = cfg.at("projector");
  const auto model = sdr::serialize::load_json_file(require<std::string>(pj, "model"));
  const auto basis = sdr::serialize::matrix_from_json(model.at("basis"));
  if (basis.rows() != dim) {
    throw std::runtime_error("projector basis dimension does not match the dataset");
  }
  return sdr::numkit::projector_from_basis(basis);
}

int cmd_regress(const std::string& config_path) {
  const json cfg = load_config(config_path);
  json train_cfg = cfg;
  train_cfg["csv"] = require<std::string>(cfg, "train_csv");
  const sdr::Dataset train = preprocess(cfg, load_dataset(train_cfg));
  const auto kind = get_or<std::string>(cfg, "regressor", "knn");

  std::optional<sdr::Dataset> test;
  if (cfg.contains("test_csv")) {
    json test_cfg = cfg;
    test_cfg["csv"] = cfg.at("test_csv").get<std::string>();
    test = preprocess(cfg, load_dataset(test_cfg));
  }

  Eigen::VectorXd predictions;
  json model_json;
  if (kind == "knn") {
    const int k = get_or(cfg, "k", 5);
    const auto projector = projector_from_config(cfg, train.dim());
    const auto model = sdr::regress::make_knn_model(train.x, train.y, projector, k);
    model_json = sdr::serialize::knn_to_json(model, require<std::string>(cfg, "train_csv"));
    if (test) predictions = sdr::regress::knn_predict_batch(model, test->x, exec_of(cfg));
  } else if (kind == "pp") {
    const auto projector = projector_from_config(cfg, train.dim());
    const auto eig = sdr::numkit::sym_eig(projector);
    const auto rank = static_cast<Eigen::Index>(std::llround(projector.trace()));
    const Eigen::MatrixXd basis = eig.eigenvectors.leftCols(std::max<Eigen::Index>(rank, 1));
    const int level = get_or(cfg, "level", 3);
    const int degree = get_or(cfg, "degree", 1);
    const double radius =
        get_or(cfg, "radius", std::sqrt(static_cast<double>(train.dim())));
    std::array<double, 2> truncation{train.y.minCoeff(), train.y.maxCoeff()};
    if (cfg.contains("truncation") && cfg.at("truncation").is_array()) {
      truncation = {cfg.at("truncation")[0].get<double>(), cfg.at("truncation")[1].get<double>()};
    }
    const auto model = sdr::regress::piecewise_poly_fit(train, basis, level, degree, radius,
                                                        truncation, exec_of(cfg));
    model_json = sdr::serialize::pp_to_json(model);
    if (test) predictions = sdr::regress::piecewise_poly_predict_batch(model, test->x, exec_of(cfg));
  } else {
    throw std::runtime_error("unknown regressor '" + kind + "' (expected knn or pp)");
  }

  if (cfg.contains("model_out")) {
    sdr::serialize::write_json_file(cfg.at("model_out").get<std::string>(), model_json);
  }
  if (test) {
    if (cfg.contains("predictions_out")) {
      std::ofstream out(cfg.at("predictions_out").get<std::string>());
      out << "prediction\n";
      out.precision(17);
      for (Eigen::Index i = 0; i < predictions.size(); ++i) out << predictions(i) << '\n';
    }
    std::cout << "test_rmse=" << sdr::metrics::rmse(predictions, test->y) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sufficient dimension reduction toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_prefix;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config document")->required();
  };

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset CSV + true basis JSON");
  add_config(synth);
  auto* estimate = app.add_subcommand("estimate", "fit one index-space method on a CSV");
  add_config(estimate);
  auto* proxy = app.add_subcommand("proxy", "level-set-count scan, CSV output");
  add_config(proxy);
  auto* rates = app.add_subcommand("rates", "synthetic projection-error rate experiment");
  add_config(rates);
  rates->add_option("--out-prefix", out_prefix, "output file prefix");
  auto* bench = app.add_subcommand("bench", "cross-validated train/test pipeline on a CSV");
  add_config(bench);
  bench->add_option("--out-prefix", out_prefix, "output file prefix");
  auto* regress = app.add_subcommand("regress", "fit/predict kNN or piecewise polynomials");
  add_config(regress);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(config_path);
    if (estimate->parsed()) return cmd_estimate(config_path);
    if (proxy->parsed()) return cmd_proxy(config_path);
    if (rates->parsed()) return cmd_rates(config_path, out_prefix);
    if (bench->parsed()) return cmd_bench(config_path, out_prefix);
    if (regress->parsed()) return cmd_regress(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
