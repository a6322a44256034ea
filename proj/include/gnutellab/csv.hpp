#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gnutellab {

// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

// Shortest decimal form that reads back to the same double.
std::string format_real(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}

  void row(const std::vector<std::string>& fields);

  template <typename... Fields>
  void cells(const Fields&... fields) {
    row({to_field(fields)...});
  }

 private:
  static std::string to_field(const std::string& s) { return s; }
  static std::string to_field(std::string_view s) { return std::string(s); }
  static std::string to_field(const char* s) { return s; }
  static std::string to_field(double v) { return format_real(v); }
  template <typename Int>
  static std::string to_field(Int v) {
    return std::to_string(v);
  }

  std::ostream* out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws ParseError naming the source if absent.
  std::size_t column(std::string_view name) const;
  std::string source;
};

// Parses RFC 4180 style CSV; the first record is the header. Every record
// must have as many fields as the header.
CsvTable read_csv(std::istream& in, const std::string& source_name);
CsvTable load_csv(const std::filesystem::path& path);

// Opens a file for writing, throwing IoError on failure.
std::ofstream open_output(const std::filesystem::path& path);

double parse_real(const std::string& text, const std::string& source, std::size_t line);
std::uint64_t parse_count(const std::string& text, const std::string& source, std::size_t line);

}  // namespace gnutellab
