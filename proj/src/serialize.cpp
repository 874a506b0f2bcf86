#include "sdr/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace sdr::serialize {

using nlohmann::json;

json matrix_to_json(const numkit::Matrix& m) {
  json cols = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    json col = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) col.push_back(m(r, c));
    cols.push_back(std::move(col));
  }
  return cols;
}

numkit::Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw std::runtime_error("matrix JSON must be a non-empty array of columns");
  }
  const auto cols = static_cast<Eigen::Index>(j.size());
  const auto rows = static_cast<Eigen::Index>(j[0].size());
  numkit::Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(c)].size()) != rows) {
      throw std::runtime_error("matrix JSON has ragged columns");
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
      m(r, c) = j[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)].get<double>();
    }
  }
  return m;
}

namespace {

json spectrum_to_json(const numkit::EigenDecomposition& eig) {
  json values = json::array();
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) values.push_back(eig.eigenvalues(i));
  return json{{"eigenvalues", std::move(values)}};
}

}  // namespace

json model_to_json(const rcls::RclsModel& model) {
  json per_level = json::array();
  for (std::size_t l = 0; l < model.per_level.size(); ++l) {
    const auto& st = model.per_level[l];
    per_level.push_back(json{{"level", l + 1},
                             {"count", st.count},
                             {"weight", st.weight},
                             {"ols_norm", st.ols.norm()},
                             {"mean_y", st.mean_y},
                             {"degenerate", st.degenerate}});
  }
  return json{{"model", "RCLS"},
              {"J", model.j},
              {"d_tilde", model.d_tilde},
              {"rtol", model.rtol},
              {"basis", matrix_to_json(model.basis)},
              {"spectrum", spectrum_to_json(model.spectrum)},
              {"per_level", std::move(per_level)},
              {"rank_deficient", model.rank_deficient}};
}

json model_to_json(const ProjectionEstimate& est) {
  return json{{"model", to_string(est.method)},
              {"J", est.j},
              {"d_tilde", est.d_tilde},
              {"rtol", est.rtol},
              {"basis", matrix_to_json(est.basis)},
              {"spectrum", spectrum_to_json(est.spectrum)},
              {"rank_deficient", est.rank_deficient}};
}

json knn_to_json(const regress::KnnModel& model, const std::string& train_csv_ref) {
  return json{{"model", "KNN"},
              {"k", model.k},
              {"projector_basis", matrix_to_json(numkit::sym_eig(model.projector)
                                                     .eigenvectors.leftCols(static_cast<Eigen::Index>(
                                                         std::llround(model.projector.trace()))))},
              {"train_csv", train_csv_ref}};
}

json pp_to_json(const regress::PiecewisePolyModel& model) {
  json cells = json::array();
  for (const auto& [id, coeffs] : model.cells) {
    json jid = json::array();
    for (const auto c : id.coords) jid.push_back(c);
    json jcoef = json::array();
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) jcoef.push_back(coeffs(i));
    cells.push_back(json{{"id", std::move(jid)}, {"coeffs", std::move(jcoef)}});
  }
  return json{{"model", "PIECEWISE_POLY"},
              {"basis", matrix_to_json(model.basis)},
              {"level", model.level},
              {"degree", model.degree},
              {"radius", model.radius},
              {"truncation", {model.truncation[0], model.truncation[1]}},
              {"cells", std::move(cells)}};
}

regress::PiecewisePolyModel pp_from_json(const json& j) {
  regress::PiecewisePolyModel model;
  model.basis = matrix_from_json(j.at("basis"));
  model.level = j.at("level").get<int>();
  model.degree = j.at("degree").get<int>();
  model.radius = j.at("radius").get<double>();
  model.truncation = {j.at("truncation")[0].get<double>(), j.at("truncation")[1].get<double>()};
  model.exponents = regress::monomial_exponents(static_cast<int>(model.basis.cols()), model.degree);
  for (const auto& cell : j.at("cells")) {
    regress::DyadicCellId id;
    for (const auto& v : cell.at("id")) id.coords.push_back(v.get<std::int64_t>());
    const auto& jc = cell.at("coeffs");
    numkit::Vector coeffs(static_cast<Eigen::Index>(jc.size()));
    for (std::size_t i = 0; i < jc.size(); ++i) {
      coeffs(static_cast<Eigen::Index>(i)) = jc[i].get<double>();
    }
    model.cells.emplace(std::move(id), std::move(coeffs));
  }
  return model;
}

void write_basis_json(const std::string& path, const numkit::Matrix& basis) {
  write_json_file(path, json{{"D", basis.rows()},
                             {"d", basis.cols()},
                             {"basis", matrix_to_json(basis)}});
}

numkit::Matrix read_basis_json(const std::string& path) {
  return matrix_from_json(load_json_file(path).at("basis"));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open JSON file: " + path);
  }
  json j;
  in >> j;
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace sdr::serialize
