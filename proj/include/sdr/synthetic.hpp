#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "sdr/dataset.hpp"
#include "sdr/numkit.hpp"

namespace sdr::harness {

using numkit::Matrix;
using numkit::Vector;

// Built-in link functions for the synthetic generators. `e` is the piecewise
// linear sum (alias "pwlin"); `linear` is the single-index identity link.
enum class LinkId { a, b, c, d, e, f, linear, custom };

LinkId link_from_string(const std::string& name);
std::string to_string(LinkId link);
int link_intrinsic_dim(LinkId link);
double eval_link(LinkId link, const Vector& u);

struct SyntheticSpec {
  LinkId link = LinkId::a;
  int dim_ambient = 20;
  Eigen::Index n = 1000;
  // Noise standard deviation as a fraction of the standard deviation of the
  // noiseless responses of the drawn sample.
  double noise_ratio = 0.01;
  std::uint64_t seed = 0;
  // 0 selects the link's natural dimension; custom links must set it.
  int dim_intrinsic = 0;
  std::function<double(const Vector&)> custom_link;
};

struct SyntheticData {
  Dataset data;
  Matrix true_basis;      // D x d, leading coordinate directions
  Matrix true_projector;  // D x D
};

// Predictors uniform on the unit ball of R^D (normalized Gaussian direction
// times a U^(1/D) radius), responses given by the link of the first d
// coordinates plus scaled Gaussian noise.
SyntheticData synth_dataset(const SyntheticSpec& spec);

}  // namespace sdr::harness
