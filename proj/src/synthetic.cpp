#include "sdr/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "sdr/rng.hpp"

namespace sdr::harness {

namespace {

double pwlin_sum(const Vector& u) {
  const double t1 = u(0), t2 = u(1), t3 = u(2);
  const double g1 = (t1 < 0 ? 0.1 * t1 : 2.0 * (t1 - 0.5)) + 0.05;
  const double g2 = t2 < 0 ? 2.0 * t2 : 0.1 * (t2 - 0.5);
  const double g3 = (t3 < 0 ? 5.0 * t3 : 0.1 * (t3 - 0.2)) + 1.0;
  return g1 + g2 + g3;
}

}  // namespace

LinkId link_from_string(const std::string& name) {
  std::string low = name;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (low == "a") return LinkId::a;
  if (low == "b") return LinkId::b;
  if (low == "c") return LinkId::c;
  if (low == "d") return LinkId::d;
  if (low == "e" || low == "pwlin") return LinkId::e;
  if (low == "f") return LinkId::f;
  if (low == "linear") return LinkId::linear;
  if (low == "custom") return LinkId::custom;
  throw std::invalid_argument("unknown link id '" + name +
                              "' (expected a, b, c, d, e/pwlin, f, linear or custom)");
}

std::string to_string(LinkId link) {
  switch (link) {
    case LinkId::a: return "a";
    case LinkId::b: return "b";
    case LinkId::c: return "c";
    case LinkId::d: return "d";
    case LinkId::e: return "pwlin";
    case LinkId::f: return "f";
    case LinkId::linear: return "linear";
    case LinkId::custom: return "custom";
  }
  throw std::logic_error("unknown LinkId");
}

int link_intrinsic_dim(LinkId link) {
  switch (link) {
    case LinkId::a: return 2;
    case LinkId::b: return 2;
    case LinkId::c: return 2;
    case LinkId::d: return 3;
    case LinkId::e: return 3;
    case LinkId::f: return 2;
    case LinkId::linear: return 1;
    case LinkId::custom: return 0;
  }
  throw std::logic_error("unknown LinkId");
}

double eval_link(LinkId link, const Vector& u) {
  switch (link) {
    case LinkId::a: return u(1) / (1.0 + (u(0) - 1.0) * (u(0) - 1.0));
    case LinkId::b: return std::max(0.0, u(0) - 0.1) + (u(1) + 1.0) / 2.0;
    case LinkId::c: return u(1) * std::exp(std::sin(u(0)) * u(1) + u(1));
    case LinkId::d: return u(1) * std::exp(std::sin(u(0)) * u(1) + u(2));
    case LinkId::e: return pwlin_sum(u);
    case LinkId::f:
      return (std::sin(u(0)) + std::cos(u(1) - 0.25)) / (1.0 + u(0) * u(0));
    case LinkId::linear: return u(0);
    case LinkId::custom:
      throw std::invalid_argument("custom links are evaluated through SyntheticSpec::custom_link");
  }
  throw std::logic_error("unknown LinkId");
}

SyntheticData synth_dataset(const SyntheticSpec& spec) {
  const int dim = spec.dim_ambient;
  int d = spec.dim_intrinsic;
  if (spec.link == LinkId::custom) {
    if (!spec.custom_link || d < 1) {
      throw std::invalid_argument("custom link requires custom_link and dim_intrinsic");
    }
  } else {
    const int natural = link_intrinsic_dim(spec.link);
    if (d == 0) d = natural;
    if (d != natural) {
      throw std::invalid_argument("link '" + to_string(spec.link) + "' has intrinsic dimension " +
                                  std::to_string(natural));
    }
  }
  if (dim < d || spec.n < 1 || !(spec.noise_ratio >= 0.0)) {
    throw std::invalid_argument("synth_dataset: need D >= d, N >= 1, noise_ratio >= 0");
  }

  Rng rng(spec.seed);
  Eigen::MatrixXd x(spec.n, dim);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    Vector g(dim);
    for (int c = 0; c < dim; ++c) g(c) = rng.normal();
    const double norm = g.norm();
    const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
    x.row(i) = (g / (norm > 0.0 ? norm : 1.0) * radius).transpose();
  }

  Eigen::VectorXd clean(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    const Vector u = x.row(i).head(d).transpose();
    clean(i) = spec.link == LinkId::custom ? spec.custom_link(u) : eval_link(spec.link, u);
  }
  const double mean = clean.mean();
  const double sd = std::sqrt((clean.array() - mean).square().sum() /
                              static_cast<double>(spec.n));
  const double noise_sd = spec.noise_ratio * sd;

  Eigen::VectorXd y(spec.n);
  for (Eigen::Index i = 0; i < spec.n; ++i) {
    y(i) = clean(i) + noise_sd * rng.normal();
  }

  SyntheticData out;
  out.data = make_dataset(std::move(x), std::move(y));
  out.true_basis = Matrix::Identity(dim, dim).leftCols(d);
  out.true_projector = numkit::projector_from_basis(out.true_basis);
  return out;
}

}  // namespace sdr::harness
