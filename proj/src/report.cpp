#include "sdr/report.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace sdr {

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc()) {
    throw std::runtime_error("number formatting failed");
  }
  return {buf, res.ptr};
}

std::string format_number(std::int64_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("table row width does not match the declared columns");
  }
  rows.push_back(std::move(row));
}

std::size_t Table::col(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] == name) return c;
  }
  throw std::out_of_range("table has no column named '" + name + "'");
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c];
    }
    out += '\n';
  }
  return out;
}

void Table::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << to_csv();
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

void ExperimentReport::write(const std::string& prefix) const {
  runs.write_csv(prefix + "_runs.csv");
  summary.write_csv(prefix + "_summary.csv");
  std::ofstream meta(prefix + "_meta.json", std::ios::binary);
  if (!meta) {
    throw std::runtime_error("cannot open for writing: " + prefix + "_meta.json");
  }
  meta << metadata.dump(2) << '\n';
}

}  // namespace sdr
