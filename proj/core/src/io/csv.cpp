#include "tightlab/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "tightlab/error.hpp"

namespace tightlab::io {

namespace {

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

}  // namespace

CsvTable parse_csv(std::string_view text, const std::string& source) {
  CsvTable t;
  t.source = source;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);  // UTF-8 BOM

  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto finish_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    const bool blank = record.size() == 1 && record[0].empty();
    if (!blank) {
      if (t.header.empty()) {
        t.header = std::move(record);
      } else {
        t.rows.push_back(std::move(record));
        t.line.push_back(record_line);
      }
    }
    record.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started && !field.empty())
          throw SchemaError(source, line, "", "stray quote inside an unquoted field");
        quoted = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
        break;
      case '\r':
        break;
      case '\n':
        finish_record();
        ++line;
        record_line = line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) throw SchemaError(source, record_line, "", "unterminated quoted field");
  if (!field.empty() || !record.empty()) finish_record();
  if (t.header.empty()) throw SchemaError(source, 1, "", "missing header line");

  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (t.rows[r].size() != t.header.size())
      throw SchemaError(source, t.line[r], "",
                        "expected " + std::to_string(t.header.size()) + " fields, found " +
                            std::to_string(t.rows[r].size()));
  return t;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

void require_header(const CsvTable& t, const std::vector<std::string>& expected) {
  std::ostringstream want;
  for (std::size_t i = 0; i < expected.size(); ++i) want << (i ? "," : "") << expected[i];
  if (t.header.size() != expected.size())
    throw SchemaError(t.source, 1, "",
                      "header has " + std::to_string(t.header.size()) + " columns; expected " +
                          want.str());
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (t.header[i] != expected[i])
      throw SchemaError(t.source, 1, t.header[i],
                        "column " + std::to_string(i + 1) + " should be '" + expected[i] +
                            "'; expected header " + want.str());
}

const std::string& field_string(const CsvTable& t, std::size_t row, std::size_t col) {
  const auto& s = t.rows.at(row).at(col);
  if (s.empty()) throw SchemaError(t.source, t.line[row], t.header[col], "empty field");
  return s;
}

double field_double(const CsvTable& t, std::size_t row, std::size_t col) {
  const auto& s = field_string(t, row, col);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw SchemaError(t.source, t.line[row], t.header[col], "'" + s + "' is not a number");
  if (!std::isfinite(v))
    throw SchemaError(t.source, t.line[row], t.header[col], "'" + s + "' is not finite");
  return v;
}

std::int64_t field_int(const CsvTable& t, std::size_t row, std::size_t col) {
  const auto& s = field_string(t, row, col);
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw SchemaError(t.source, t.line[row], t.header[col], "'" + s + "' is not an integer");
  return v;
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InvalidArgument("cannot format number");
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
  for (const auto& h : header) field(h);
  end_row();
}

void CsvWriter::separator() {
  if (in_row_ >= columns_) throw InvalidArgument("CSV row has more fields than the header");
  if (in_row_++ > 0) out_.push_back(',');
}

CsvWriter& CsvWriter::field(std::string_view text) {
  separator();
  if (!needs_quotes(text)) {
    out_.append(text);
    return *this;
  }
  out_.push_back('"');
  for (char c : text) {
    if (c == '"') out_.push_back('"');
    out_.push_back(c);
  }
  out_.push_back('"');
  return *this;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  out_ += format_double(value);
  return *this;
}

CsvWriter& CsvWriter::field(std::int64_t value) {
  separator();
  out_ += std::to_string(value);
  return *this;
}

CsvWriter& CsvWriter::empty_field() {
  separator();
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_)
    throw InvalidArgument("CSV row has " + std::to_string(in_row_) + " fields, header has " +
                          std::to_string(columns_));
  out_.push_back('\n');
  in_row_ = 0;
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at " + path);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tightlab::io
