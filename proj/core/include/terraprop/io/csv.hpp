#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace terraprop::io {

/// Comma-separated table with a header row. Fields may be double-quoted.
class CsvTable {
 public:
  CsvTable(std::string source, std::vector<std::string> header,
           std::vector<std::vector<std::string>> rows);

  [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
  [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
  [[nodiscard]] const std::string& source() const noexcept { return source_; }

  /// Column index; DataError(missing_column) naming the column and file.
  [[nodiscard]] std::size_t column(std::string_view name) const;
  [[nodiscard]] std::optional<std::size_t> find_column(std::string_view name) const noexcept;

  [[nodiscard]] const std::string& text(std::size_t row, std::size_t col) const;
  /// Parses a double; DataError(malformed) naming file, line and column.
  [[nodiscard]] double number(std::size_t row, std::size_t col) const;
  [[nodiscard]] long long integer(std::size_t row, std::size_t col) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

CsvTable parse_csv(std::string_view text, std::string source = "<memory>");
CsvTable read_csv(const std::filesystem::path& path);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double value);

/// Builds CSV text row by row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
  CsvWriter& field(std::size_t value) { return field(static_cast<long long>(value)); }
  CsvWriter& empty_field() { return field(std::string_view{}); }
  CsvWriter& end_row();

  [[nodiscard]] const std::string& str() const noexcept { return out_; }

 private:
  std::string out_;
  bool row_start_ = true;
};

}  // namespace terraprop::io
