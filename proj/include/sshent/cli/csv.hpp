#pragma once

// Minimal CSV table: header plus rows of optional doubles. Numbers are written
// in the shortest form that round-trips; undefined cells are "NA".

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sshent::cli {

using Cell = std::optional<double>;

inline std::string format_number(double x) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c) { return c ? format_number(*c) : "NA"; }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void write(std::ostream& os) const {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_cell(r[i]);
      os << "\n";
    }
  }
};

inline void write_file(const std::string& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  t.write(out);
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

}  // namespace sshent::cli
