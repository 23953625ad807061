#pragma once

// Minimal delimited-text reader/writer. Quoted fields with doubled quotes are
// accepted; embedded newlines are not.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "simplexnet/error.hpp"

namespace simplexnet::io {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based line number of each row in the source file.
  std::vector<std::size_t> line_numbers;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_line(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          field.push_back('"');
          ++k;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delimiter) {
      fields.emplace_back(trim(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  fields.emplace_back(trim(field));
  return fields;
}

inline CsvTable parse_csv(std::istream& in, char delimiter, bool has_header) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_done = !has_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_line(line, delimiter);
    if (!header_done) {
      table.header = std::move(fields);
      header_done = true;
      continue;
    }
    const std::size_t expected = table.header.empty()
                                     ? (table.rows.empty() ? fields.size() : table.rows.front().size())
                                     : table.header.size();
    if (fields.size() != expected)
      throw InputError("row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(expected),
                       line_no);
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (table.rows.empty()) throw InputError("no data rows");
  return table;
}

inline CsvTable read_csv(const std::string& path, char delimiter, bool has_header) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return parse_csv(in, delimiter, has_header);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what(), e.row(), e.column());
  }
}

/// Parses a finite double; throws InputError carrying the cell location.
inline double parse_number(std::string_view text, std::size_t row, std::size_t column) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last)
    throw InputError("non-numeric cell '" + std::string(text) + "'", row, column);
  if (!std::isfinite(value)) throw InputError("non-finite cell '" + std::string(text) + "'", row, column);
  return value;
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace simplexnet::io
