#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace favfa::data {

/// In-memory CSV table: header row plus string cells. Supports RFC 4180
/// quoting; `,` delimiter only.
class CsvTable {
 public:
  static CsvTable parse(std::string_view text, std::string_view origin = "<memory>");
  static CsvTable read(const std::filesystem::path& path);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }
  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;
  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Quotes a field when it contains a delimiter, quote, or newline.
std::string csv_escape(std::string_view field);

/// Strict real parse (whole string, `.` decimal point). Throws ParseError.
double parse_real(std::string_view text, std::string_view context);

}  // namespace favfa::data
