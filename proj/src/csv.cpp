#include "gnutellab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "gnutellab/error.hpp"

namespace gnutellab {

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_real(double value) {
  char buf[32];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) *out_ << ',';
    *out_ << csv_escape(fields[i]);
  }
  *out_ << '\n';
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError(source, 1, "missing column '" + std::string(name) + "'");
}

CsvTable read_csv(std::istream& in, const std::string& source_name) {
  CsvTable table;
  table.source = source_name;
  std::vector<std::string> record;
  std::string field;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool in_quotes = false;
  bool any = false;

  auto finish_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    if (table.header.empty() && table.rows.empty() && !any) {
      table.header = std::move(record);
    } else if (!(record.size() == 1 && record[0].empty())) {
      if (record.size() != table.header.size()) {
        throw ParseError(source_name, record_line,
                         "expected " + std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(record.size()));
      }
      table.rows.push_back(std::move(record));
    }
    any = true;
    record.clear();
  };

  char c;
  bool pending = false;
  while (in.get(c)) {
    pending = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        break;
      case '\n':
        finish_record();
        pending = false;
        record_line = ++line;
        break;
      default:
        field += c;
    }
  }
  if (in_quotes) throw ParseError(source_name, record_line, "unterminated quoted field");
  if (pending) finish_record();
  if (!any) throw ParseError(source_name, 1, "empty CSV file");
  return table;
}

CsvTable load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in, path.string());
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

double parse_real(const std::string& text, const std::string& source, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ParseError(source, line, "not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& text, const std::string& source, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(source, line, "not a non-negative integer: '" + text + "'");
  }
  return v;
}

}  // namespace gnutellab
