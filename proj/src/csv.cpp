#include "cityind/csv.hpp"

#include <fstream>
#include <sstream>

#include "cityind/util.hpp"

namespace cityind {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"') {
      if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else {
        quoted = !quoted;
      }
    } else if (c == ',' && !quoted) {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\r' && !quoted) {
      continue;
    } else {
      cell += c;
    }
  }
  out.push_back(std::move(cell));
  return out;
}

std::string csv_escape(std::string_view field) {
  bool needs = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

int CsvTable::col(std::string_view name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (trim(header[i]) == trim(name)) return static_cast<int>(i);
  return -1;
}

int CsvTable::require_col(std::string_view name, const std::string& context) const {
  int c = col(name);
  if (c < 0) throw InputError(context + ": missing column '" + std::string(name) + "'");
  return c;
}

CsvTable parse_csv_text(std::string_view text) {
  CsvTable table;
  // Strip UTF-8 BOM if present.
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB &&
      static_cast<unsigned char>(text[2]) == 0xBF)
    text.remove_prefix(3);

  // Split on newlines outside quotes.
  std::vector<std::string> lines;
  {
    std::string cur;
    bool quoted = false;
    for (char c : text) {
      if (c == '"') quoted = !quoted;
      if (c == '\n' && !quoted) {
        lines.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) lines.push_back(std::move(cur));
  }

  bool first = true;
  for (auto& line : lines) {
    std::string t = line;
    while (!t.empty() && (t.back() == '\r')) t.pop_back();
    if (t.empty()) continue;
    auto cells = split_csv_line(t);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv_text(ss.str());
}

}  // namespace cityind
