#pragma once

// Plotter-agnostic CSV tables. Doubles are written with 17 significant digits through
// std::to_chars, so output is locale independent and round-trips exactly.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace infogeo::cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

std::string format_double(double v);
/// Empty field → nullopt. Throws ConfigError on anything that is not a full number.
std::optional<double> parse_double(const std::string& field);

void write_csv(const CsvTable& table, std::ostream& out);
/// Fields are never quoted by the writer; the reader therefore splits on bare commas.
CsvTable read_csv(std::istream& in);

}  // namespace infogeo::cli
