#include "sdr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sdr/rng.hpp"

namespace sdr {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

Dataset load_csv_impl(const std::string& path, Eigen::Index response_col,
                      const std::vector<std::string>& header,
                      const std::vector<std::string>& lines) {
  const Eigen::Index n_cols = static_cast<Eigen::Index>(header.size());
  const Eigen::Index n_rows = static_cast<Eigen::Index>(lines.size());
  const Eigen::Index dim = n_cols - 1;
  if (dim < 1) {
    throw std::runtime_error(path + ": need at least one predictor column besides the response");
  }

  Dataset ds;
  ds.x.resize(n_rows, dim);
  ds.y.resize(n_rows);
  ds.response_name = header[static_cast<std::size_t>(response_col)];
  for (Eigen::Index c = 0; c < n_cols; ++c) {
    if (c != response_col) ds.feature_names.push_back(header[static_cast<std::size_t>(c)]);
  }

  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const auto fields = split_fields(lines[static_cast<std::size_t>(r)]);
    if (static_cast<Eigen::Index>(fields.size()) != n_cols) {
      throw std::runtime_error(path + ": data row " + std::to_string(r + 1) + " has " +
                               std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(n_cols));
    }
    Eigen::Index xc = 0;
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      double v = 0.0;
      if (!parse_double(fields[static_cast<std::size_t>(c)], v)) {
        throw std::runtime_error(path + ": data row " + std::to_string(r + 1) + ", column '" +
                                 header[static_cast<std::size_t>(c)] + "': cannot parse '" +
                                 fields[static_cast<std::size_t>(c)] + "' as a number");
      }
      if (c == response_col) {
        ds.y(r) = v;
      } else {
        ds.x(r, xc++) = v;
      }
    }
  }
  return ds;
}

std::pair<std::vector<std::string>, std::vector<std::string>> read_csv_lines(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open CSV file: " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    lines.push_back(line);
  }
  if (lines.empty()) {
    throw std::runtime_error(path + ": file is empty");
  }
  const auto header = split_fields(lines.front());
  if (lines.size() < 2) {
    throw std::runtime_error(path + ": no data rows after the header");
  }
  return {header, {lines.begin() + 1, lines.end()}};
}

}  // namespace

Dataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y) {
  if (x.rows() < 1 || x.cols() < 1) {
    throw std::invalid_argument("dataset needs N >= 1 rows and D >= 1 columns");
  }
  if (x.rows() != y.size()) {
    throw std::invalid_argument("predictor rows and response length differ");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("dataset has non-finite entries");
  }
  Dataset ds;
  ds.x = std::move(x);
  ds.y = std::move(y);
  ds.feature_names.reserve(static_cast<std::size_t>(ds.x.cols()));
  for (Eigen::Index c = 0; c < ds.x.cols(); ++c) {
    ds.feature_names.push_back("x" + std::to_string(c + 1));
  }
  return ds;
}

int ResponsePartition::locate(double y) const {
  const int j = intervals();
  const auto it = std::upper_bound(edges.begin(), edges.end(), y);
  int idx = static_cast<int>(it - edges.begin()) - 1;
  if (idx < 0) idx = 0;
  if (idx > j - 1) idx = j - 1;
  return idx;
}

Dataset load_csv(const std::string& path, const std::string& response_column) {
  const auto [header, lines] = read_csv_lines(path);
  const auto it = std::find(header.begin(), header.end(), response_column);
  if (it == header.end()) {
    throw std::runtime_error(path + ": response column '" + response_column +
                             "' not found in header");
  }
  return load_csv_impl(path, it - header.begin(), header, lines);
}

Dataset load_csv(const std::string& path, int response_index) {
  const auto [header, lines] = read_csv_lines(path);
  const int n_cols = static_cast<int>(header.size());
  int idx = response_index;
  if (idx < 0) idx += n_cols;
  if (idx < 0 || idx >= n_cols) {
    throw std::runtime_error(path + ": response index " + std::to_string(response_index) +
                             " out of range for " + std::to_string(n_cols) + " columns");
  }
  return load_csv_impl(path, idx, header, lines);
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  for (Eigen::Index c = 0; c < ds.dim(); ++c) {
    out << ds.feature_names[static_cast<std::size_t>(c)] << ',';
  }
  out << ds.response_name << '\n';
  out.precision(17);
  for (Eigen::Index r = 0; r < ds.n(); ++r) {
    for (Eigen::Index c = 0; c < ds.dim(); ++c) {
      out << ds.x(r, c) << ',';
    }
    out << ds.y(r) << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::pair<Dataset, std::vector<AffineMap>> standardize_features(const Dataset& ds) {
  Dataset out = ds;
  std::vector<AffineMap> maps(static_cast<std::size_t>(ds.dim()));
  for (Eigen::Index c = 0; c < ds.dim(); ++c) {
    const double lo = ds.x.col(c).minCoeff();
    const double hi = ds.x.col(c).maxCoeff();
    AffineMap m;
    if (hi > lo) {
      m.scale = 2.0 / (hi - lo);
      m.offset = -(hi + lo) / (hi - lo);
    } else {
      m.scale = 0.0;
      m.offset = 0.0;
    }
    out.x.col(c) = (m.scale * ds.x.col(c)).array() + m.offset;
    maps[static_cast<std::size_t>(c)] = m;
  }
  return {std::move(out), std::move(maps)};
}

Dataset log_transform_response(const Dataset& ds, double offset) {
  Dataset out = ds;
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    const double shifted = ds.y(i) + offset;
    if (!(shifted > 0.0)) {
      throw std::invalid_argument("log_transform_response: Y[" + std::to_string(i) +
                                  "] + offset = " + std::to_string(shifted) +
                                  " is not positive");
    }
    out.y(i) = std::log(shifted);
  }
  return out;
}

ResponsePartition dyadic_partition(const Eigen::VectorXd& y, int j) {
  if (j < 1) {
    throw std::invalid_argument("dyadic_partition: J must be >= 1");
  }
  if (y.size() < 1) {
    throw std::invalid_argument("dyadic_partition: empty response vector");
  }
  const double lo = y.minCoeff();
  const double hi = y.maxCoeff();
  if (!(hi > lo)) {
    throw std::invalid_argument("dyadic_partition: degenerate response range [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  ResponsePartition part;
  part.edges.resize(static_cast<std::size_t>(j) + 1);
  for (int l = 0; l <= j; ++l) {
    part.edges[static_cast<std::size_t>(l)] = lo + (hi - lo) * (static_cast<double>(l) / j);
  }
  part.edges.front() = lo;
  part.edges.back() = hi;
  for (std::size_t l = 0; l + 1 < part.edges.size(); ++l) {
    if (!(part.edges[l] < part.edges[l + 1])) {
      throw std::invalid_argument("dyadic_partition: range too narrow for J = " +
                                  std::to_string(j) + " intervals");
    }
  }
  return part;
}

LevelSetAssignment assign_level_sets(const Dataset& ds, const ResponsePartition& part) {
  const int j = part.intervals();
  if (j < 1) {
    throw std::invalid_argument("assign_level_sets: partition has no intervals");
  }
  LevelSetAssignment out;
  out.levels.resize(static_cast<std::size_t>(j));
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    out.levels[static_cast<std::size_t>(part.locate(ds.y(i)))].push_back(i);
  }
  return out;
}

Dataset subset(const Dataset& ds, const std::vector<Eigen::Index>& rows) {
  Dataset out;
  out.feature_names = ds.feature_names;
  out.response_name = ds.response_name;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), ds.dim());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.row(static_cast<Eigen::Index>(i)) = ds.x.row(rows[i]);
    out.y(static_cast<Eigen::Index>(i)) = ds.y(rows[i]);
  }
  return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("split_train_test: test_fraction must lie in (0,1)");
  }
  const Eigen::Index n = ds.n();
  const auto n_test = static_cast<Eigen::Index>(
      std::ceil(test_fraction * static_cast<double>(n)));
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(seed);
  rng.shuffle(perm);
  std::vector<Eigen::Index> test_rows(perm.begin(), perm.begin() + n_test);
  std::vector<Eigen::Index> train_rows(perm.begin() + n_test, perm.end());
  std::sort(test_rows.begin(), test_rows.end());
  std::sort(train_rows.begin(), train_rows.end());
  if (train_rows.empty()) {
    throw std::invalid_argument("split_train_test: split leaves an empty training set");
  }
  return {subset(ds, train_rows), subset(ds, test_rows)};
}

std::vector<std::vector<Eigen::Index>> kfold_indices(Eigen::Index n, int k, std::uint64_t seed) {
  if (k < 2 || static_cast<Eigen::Index>(k) > n) {
    throw std::invalid_argument("kfold_indices: need 2 <= k <= N");
  }
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(seed);
  rng.shuffle(perm);
  std::vector<std::vector<Eigen::Index>> folds(static_cast<std::size_t>(k));
  const Eigen::Index base = n / k;
  const int extra = static_cast<int>(n % k);
  std::size_t cursor = 0;
  for (int f = 0; f < k; ++f) {
    const Eigen::Index size = base + (f < extra ? 1 : 0);
    auto& fold = folds[static_cast<std::size_t>(f)];
    fold.assign(perm.begin() + static_cast<std::ptrdiff_t>(cursor),
                perm.begin() + static_cast<std::ptrdiff_t>(cursor + static_cast<std::size_t>(size)));
    std::sort(fold.begin(), fold.end());
    cursor += static_cast<std::size_t>(size);
  }
  return folds;
}

}  // namespace sdr
