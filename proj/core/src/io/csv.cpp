#include "terraprop/io/csv.hpp"

#include <charconv>
#include <cmath>

#include "terraprop/error.hpp"
#include "terraprop/io/atomic_file.hpp"

namespace terraprop::io {
namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  for (auto& f : fields) {  // trim surrounding blanks
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string{} : f.substr(b, e - b + 1);
  }
  return fields;
}

}  // namespace

CsvTable::CsvTable(std::string source, std::vector<std::string> header,
                   std::vector<std::vector<std::string>> rows)
    : source_(std::move(source)), header_(std::move(header)), rows_(std::move(rows)) {}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
  if (auto i = find_column(name)) return *i;
  throw DataError(DataErrc::missing_column,
                  "'" + source_ + "' has no column '" + std::string(name) + "'");
}

const std::string& CsvTable::text(std::size_t row, std::size_t col) const {
  return rows_.at(row).at(col);
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const auto& s = text(row, col);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DataError(DataErrc::malformed, "'" + source_ + "' line " + std::to_string(row + 2) +
                                             " column '" + header_[col] + "': '" + s +
                                             "' is not a finite number");
  }
  return v;
}

long long CsvTable::integer(std::size_t row, std::size_t col) const {
  const auto& s = text(row, col);
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DataError(DataErrc::malformed, "'" + source_ + "' line " + std::to_string(row + 2) +
                                             " column '" + header_[col] + "': '" + s +
                                             "' is not an integer");
  }
  return v;
}

CsvTable parse_csv(std::string_view text, std::string source) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (pos > text.size()) break;
      continue;
    }
    auto fields = split_line(line);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size()) {
      throw DataError(DataErrc::malformed, "'" + source + "' line " + std::to_string(line_no) +
                                               " has " + std::to_string(fields.size()) +
                                               " fields, header has " +
                                               std::to_string(header.size()));
    }
    rows.push_back(std::move(fields));
  }
  if (header.empty()) throw DataError(DataErrc::malformed, "'" + source + "' has no header row");
  return CsvTable(std::move(source), std::move(header), std::move(rows));
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(read_file(path), path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return {buf, res.ptr};
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) {
  for (const auto& h : header) field(h);
  end_row();
}

CsvWriter& CsvWriter::field(std::string_view text) {
  if (!row_start_) out_ += ',';
  row_start_ = false;
  if (text.find_first_of(",\"\n") != std::string_view::npos) {
    out_ += '"';
    for (char ch : text) {
      if (ch == '"') out_ += '"';
      out_ += ch;
    }
    out_ += '"';
  } else {
    out_ += text;
  }
  return *this;
}

CsvWriter& CsvWriter::field(double value) { return field(std::string_view(format_double(value))); }

CsvWriter& CsvWriter::field(long long value) {
  return field(std::string_view(std::to_string(value)));
}

CsvWriter& CsvWriter::end_row() {
  out_ += '\n';
  row_start_ = true;
  return *this;
}

}  // namespace terraprop::io
