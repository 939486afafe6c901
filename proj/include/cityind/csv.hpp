#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cityind {

// RFC-style CSV: quoted fields may contain commas, doubled quotes, CR.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // column index by (trimmed) name, -1 if absent
  int col(std::string_view name) const;
  int require_col(std::string_view name, const std::string& context) const;
};

CsvTable parse_csv_text(std::string_view text);
CsvTable read_csv_file(const std::string& path);

}  // namespace cityind
