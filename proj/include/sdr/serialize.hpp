#pragma once

#include <string>

#include "json.hpp"
#include "sdr/baselines.hpp"
#include "sdr/knn.hpp"
#include "sdr/piecewise_poly.hpp"
#include "sdr/rcls.hpp"

namespace sdr::serialize {

// Matrices travel as arrays of columns.
nlohmann::json matrix_to_json(const numkit::Matrix& m);
numkit::Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const rcls::RclsModel& model);
nlohmann::json model_to_json(const ProjectionEstimate& est);

// kNN models reference their training CSV rather than embedding it.
nlohmann::json knn_to_json(const regress::KnnModel& model, const std::string& train_csv_ref);
nlohmann::json pp_to_json(const regress::PiecewisePolyModel& model);
regress::PiecewisePolyModel pp_from_json(const nlohmann::json& j);

// True-basis sidecar written by the synthetic generator and consumed by the
// estimation driver for error reporting.
void write_basis_json(const std::string& path, const numkit::Matrix& basis);
numkit::Matrix read_basis_json(const std::string& path);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace sdr::serialize
