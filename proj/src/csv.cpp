#include "cpm/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <iterator>
#include <optional>
#include <unordered_map>

#include "cpm/error.hpp"

namespace cpm {

std::vector<std::vector<std::string>> read_csv_records(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  std::size_t line = 1;
  std::size_t column = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_open = false;
  std::size_t quote_line = 0;
  std::size_t quote_column = 0;

  const auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    field_was_quoted = false;
    record_open = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
          column += 2;
          continue;
        }
        in_quotes = false;
        ++column;
        continue;
      }
      field += c;
      if (c == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      continue;
    }

    record_open = true;
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted)
          throw ParseError("unexpected quote inside unquoted field", line, column);
        in_quotes = true;
        field_was_quoted = true;
        quote_line = line;
        quote_column = column;
        ++column;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
        ++column;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        column = 1;
        break;
      default:
        if (field_was_quoted) throw ParseError("text after closing quote", line, column);
        field += c;
        ++column;
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", quote_line, quote_column);
  if (record_open) end_record();
  return records;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::optional<std::int64_t> as_int(std::string_view s) {
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> as_float(std::string_view s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> as_bool(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "true") return true;
  if (lower == "false") return false;
  return std::nullopt;
}

ScalarType infer_column_type(const std::vector<std::vector<std::string>>& rows, std::size_t col) {
  bool all_int = true;
  bool all_float = true;
  bool all_bool = true;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (col >= rows[r].size() || rows[r][col].empty()) continue;
    const std::string& cell = rows[r][col];
    if (all_int && !as_int(cell)) all_int = false;
    if (all_float && !as_float(cell)) all_float = false;
    if (all_bool && !as_bool(cell)) all_bool = false;
    if (!all_int && !all_float && !all_bool) break;
  }
  if (all_int) return ScalarType::Int;
  if (all_float) return ScalarType::Float;
  if (all_bool) return ScalarType::Boolean;
  return ScalarType::String;
}

Scalar convert(const std::string& cell, ScalarType type) {
  switch (type) {
    case ScalarType::Int: return *as_int(cell);
    case ScalarType::Float: return *as_float(cell);
    case ScalarType::Boolean: return *as_bool(cell);
    default: return cell;
  }
}

}  // namespace

EventLog parse_csv(std::string_view text, const CsvMapping& mapping, std::string name) {
  const auto rows = read_csv_records(text);
  if (rows.empty()) throw ConfigurationError("CSV input has no header row");
  const auto& header = rows.front();

  const auto find_column = [&](const std::string& wanted, std::string_view role) {
    const auto it = std::find(header.begin(), header.end(), wanted);
    if (it == header.end())
      throw ConfigurationError(std::string(role) + " column '" + wanted + "' not found in CSV header");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t case_col = find_column(mapping.case_column, "case");
  const std::size_t activity_col = find_column(mapping.activity_column, "activity");
  const std::size_t timestamp_col = find_column(mapping.timestamp_column, "timestamp");

  struct AttributeColumn {
    std::size_t index;
    ScalarType type;
  };
  std::vector<AttributeColumn> attribute_columns;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == case_col || c == activity_col || c == timestamp_col || header[c].empty()) continue;
    attribute_columns.push_back({c, infer_column_type(rows, c)});
  }

  std::vector<Trace> traces;
  std::unordered_map<std::string, std::size_t> trace_index;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "row " + std::to_string(r);
    if (row.size() == 1 && row[0].empty()) continue;  // blank line
    if (row.size() != header.size())
      throw IngestionError(where + ": expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(row.size()));

    const std::string& case_id = row[case_col];
    if (case_id.empty()) throw IngestionError(where + ": empty case id");
    if (row[activity_col].empty()) throw IngestionError(where + ": empty activity");
    const auto ts = parse_with_format(row[timestamp_col], mapping.timestamp_format);
    if (!ts) throw IngestionError(where + ": unparseable timestamp '" + row[timestamp_col] + "'");

    Event event{row[activity_col], *ts, {}};
    for (const auto& col : attribute_columns) {
      if (row[col.index].empty()) continue;
      event.attributes.emplace(header[col.index], convert(row[col.index], col.type));
    }

    auto [it, inserted] = trace_index.try_emplace(case_id, traces.size());
    if (inserted) traces.push_back(Trace{case_id, {}, {}});
    traces[it->second].events.push_back(std::move(event));
  }
  return EventLog(std::move(name), std::move(traces));
}

EventLog parse_csv(std::istream& input, const CsvMapping& mapping, std::string name) {
  const std::string content{std::istreambuf_iterator<char>(input), std::istreambuf_iterator<char>()};
  return parse_csv(std::string_view(content), mapping, std::move(name));
}

}  // namespace cpm
