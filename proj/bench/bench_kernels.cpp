// Wall-time comparison of the serial reference kernels against their OpenMP
// counterparts. Results are identical by construction; this target only
// reports the speedup.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sdr/baselines.hpp"
#include "sdr/experiments.hpp"
#include "sdr/knn.hpp"
#include "sdr/piecewise_poly.hpp"
#include "sdr/rcls.hpp"
#include "sdr/synthetic.hpp"

using sdr::Exec;

namespace {

double time_of(const std::function<void()>& fn, int runs = 3) {
  double best = 1e300;
  for (int i = 0; i < runs; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const double t =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (t < best) best = t;
  }
  return best;
}

void report(const std::string& name, double serial_s, double parallel_s) {
  std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name.c_str(), serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n", sdr::max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    sdr::harness::SyntheticSpec spec;
    spec.link = sdr::harness::LinkId::a;
    spec.dim_ambient = 20;
    spec.n = 200000;
    spec.seed = 1;
    const auto data = sdr::harness::synth_dataset(spec);
    const auto assign = sdr::assign_level_sets(data.data, sdr::dyadic_partition(data.data.y, 24));
    const double ts = time_of([&] { sdr::rcls::level_set_stats(data.data, assign, 1e-10, Exec::serial); });
    const double tp = time_of([&] { sdr::rcls::level_set_stats(data.data, assign, 1e-10, Exec::parallel); });
    report("level_set_stats", ts, tp);
  }

  {
    sdr::harness::SyntheticSpec spec;
    spec.link = sdr::harness::LinkId::a;
    spec.dim_ambient = 20;
    spec.n = 100000;
    spec.seed = 2;
    const auto data = sdr::harness::synth_dataset(spec);
    const auto wd = sdr::baselines::whiten(data.data);
    const auto assign = sdr::assign_level_sets(data.data, sdr::dyadic_partition(data.data.y, 60));
    const auto moments = sdr::baselines::slice_moments(wd.z, assign, Exec::serial);
    const double ts = time_of([&] {
      sdr::baselines::candidate_from_moments(sdr::SdrMethod::dr, moments, 20, Exec::serial);
    });
    const double tp = time_of([&] {
      sdr::baselines::candidate_from_moments(sdr::SdrMethod::dr, moments, 20, Exec::parallel);
    });
    report("dr_pair_reduction", ts, tp);
  }

  {
    sdr::harness::SyntheticSpec spec;
    spec.link = sdr::harness::LinkId::a;
    spec.dim_ambient = 10;
    spec.n = 40000;
    spec.seed = 3;
    const auto data = sdr::harness::synth_dataset(spec);
    const auto model = sdr::regress::make_knn_model(data.data.x, data.data.y,
                                                    data.true_projector, 10);
    Eigen::MatrixXd queries = data.data.x.topRows(512);
    const double ts = time_of([&] { sdr::regress::knn_predict_batch(model, queries, Exec::serial); });
    const double tp = time_of([&] { sdr::regress::knn_predict_batch(model, queries, Exec::parallel); });
    report("knn_predict_batch", ts, tp);
  }

  {
    sdr::harness::SyntheticSpec spec;
    spec.link = sdr::harness::LinkId::a;
    spec.dim_ambient = 10;
    spec.n = 150000;
    spec.seed = 4;
    const auto data = sdr::harness::synth_dataset(spec);
    const Eigen::MatrixXd basis = data.true_basis;
    const double ts = time_of([&] {
      sdr::regress::piecewise_poly_fit(data.data, basis, 5, 2, 1.0, {-2.0, 2.0}, Exec::serial);
    });
    const double tp = time_of([&] {
      sdr::regress::piecewise_poly_fit(data.data, basis, 5, 2, 1.0, {-2.0, 2.0}, Exec::parallel);
    });
    report("piecewise_poly_fit", ts, tp);
  }

  {
    sdr::harness::RateConfig config;
    config.methods = {sdr::SdrMethod::rcls, sdr::SdrMethod::sir};
    config.links = {sdr::harness::LinkId::a};
    config.n_grid = {4000};
    config.j_grid = {2, 4, 8, 16};
    config.dim_ambient = 20;
    config.repetitions = 8;
    config.seed = 5;
    config.exec = Exec::serial;
    const double ts = time_of([&] { sdr::harness::run_rate_experiment(config); }, 1);
    config.exec = Exec::parallel;
    const double tp = time_of([&] { sdr::harness::run_rate_experiment(config); }, 1);
    report("rate_experiment_reps", ts, tp);
  }

  return 0;
}
