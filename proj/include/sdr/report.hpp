#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace sdr {

// Deterministic number formatting (shortest round-trip representation), so
// that re-running a driver with the same config reproduces output files byte
// for byte.
std::string format_number(double v);
std::string format_number(std::int64_t v);

// A small column-ordered table for CSV export.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  // Index of a named column; throws if absent.
  std::size_t col(const std::string& name) const;
  std::string to_csv() const;
  void write_csv(const std::string& path) const;
};

// Driver output bundle: a per-repetition table, an aggregated table, and a
// JSON sidecar (config echo, seeds, wall time). Only the sidecar may contain
// non-reproducible fields such as timings.
struct ExperimentReport {
  Table runs;
  Table summary;
  nlohmann::json metadata;

  // Writes <prefix>_runs.csv, <prefix>_summary.csv, <prefix>_meta.json.
  void write(const std::string& prefix) const;
};

}  // namespace sdr
