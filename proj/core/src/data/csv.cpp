#include "favfa/data/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "favfa/error.hpp"

namespace favfa::data {
namespace {

std::vector<std::vector<std::string>> split_records(std::string_view text,
                                                    std::string_view origin) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_record = [&] {
    fields.push_back(std::move(field));
    field.clear();
    // A record consisting of one empty field is a blank line.
    if (!(fields.size() == 1 && fields[0].empty() && !field_started)) {
      records.push_back(std::move(fields));
    }
    fields.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw Error(ErrorCode::kParseError, std::string(origin) + ":" + std::to_string(line) +
                                                  ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::kParseError, std::string(origin) + ": unterminated quoted field");
  }
  if (field_started || !field.empty() || !fields.empty()) end_record();
  return records;
}

}  // namespace

CsvTable CsvTable::parse(std::string_view text, std::string_view origin) {
  // Strip a UTF-8 byte order mark.
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto records = split_records(text, origin);
  if (records.empty()) {
    throw Error(ErrorCode::kParseError, std::string(origin) + ": missing header row");
  }
  CsvTable table;
  table.origin_ = std::string(origin);
  table.header_ = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != table.header_.size()) {
      throw Error(ErrorCode::kParseError,
                  table.origin_ + ": row " + std::to_string(i + 1) + " has " +
                      std::to_string(records[i].size()) + " fields, header has " +
                      std::to_string(table.header_.size()));
    }
    table.rows_.push_back(std::move(records[i]));
  }
  return table;
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw Error(ErrorCode::kParseError, origin_ + ": missing column '" + std::string(name) + "'");
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

double parse_real(std::string_view text, std::string_view context) {
  std::string_view t = text;
  while (!t.empty() && t.front() == ' ') t.remove_prefix(1);
  while (!t.empty() && t.back() == ' ') t.remove_suffix(1);
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw Error(ErrorCode::kParseError,
                std::string(context) + ": '" + std::string(text) + "' is not a finite real");
  }
  return value;
}

}  // namespace favfa::data
