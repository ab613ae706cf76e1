#pragma once

// Minimal RFC 4180 reader/writer. Numbers are written with the shortest representation
// that parses back to the same double.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tightlab::io {

struct CsvTable {
  std::string source;  // file name used in diagnostics
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line;  // 1-based line of each row, header is line 1
};

CsvTable parse_csv(std::string_view text, const std::string& source);
CsvTable read_csv(const std::string& path);

// Throws SchemaError unless the header matches `expected` exactly.
void require_header(const CsvTable& table, const std::vector<std::string>& expected);

// Typed field access with row/column diagnostics.
double field_double(const CsvTable& t, std::size_t row, std::size_t col);
std::int64_t field_int(const CsvTable& t, std::size_t row, std::size_t col);
const std::string& field_string(const CsvTable& t, std::size_t row, std::size_t col);

std::string format_double(double value);

class CsvWriter {
public:
  explicit CsvWriter(const std::vector<std::string>& header);
  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(std::int64_t value);
  CsvWriter& field(int value) { return field(static_cast<std::int64_t>(value)); }
  CsvWriter& empty_field();
  void end_row();
  const std::string& str() const noexcept { return out_; }

private:
  void separator();
  std::string out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

// Writes to a temporary sibling and renames it over `path`; no partial file on failure.
void write_file_atomic(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace tightlab::io
