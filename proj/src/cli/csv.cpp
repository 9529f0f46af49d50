#include "infogeo/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "infogeo/errors.hpp"

namespace infogeo::cli {

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(const std::string& field) {
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  const char* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError("not a number: '" + field + "'", 0);
  return v;
}

namespace {

void write_row(const std::vector<std::string>& cells, std::ostream& out) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

void write_csv(const CsvTable& table, std::ostream& out) {
  write_row(table.header, out);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size())
      throw DimensionError("csv row has " + std::to_string(r.size()) + " fields, header has " +
                           std::to_string(table.header.size()));
    write_row(r, out);
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size())
      throw ConfigError("expected " + std::to_string(t.header.size()) + " fields, got " +
                            std::to_string(cells.size()),
                        lineno);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace infogeo::cli
