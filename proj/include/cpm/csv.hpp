#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cpm/event_log.hpp"

namespace cpm {

struct CsvMapping {
  std::string case_column = "case_id";
  std::string activity_column = "activity";
  std::string timestamp_column = "timestamp";
  /// strftime-style; empty or "ISO8601" selects ISO-8601 parsing.
  std::string timestamp_format = "ISO8601";
};

/// RFC-4180 records. Accepts LF or CRLF line endings; a trailing newline
/// does not produce an empty record. Throws ParseError on an unterminated
/// quoted field or stray quote.
std::vector<std::vector<std::string>> read_csv_records(std::string_view text);

/// Quotes the field when it contains a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);

/// One event per data row, grouped by the case column into traces in order
/// of first appearance. Unmapped columns become event attributes; each
/// column's type is inferred over its non-empty cells (int, then float,
/// then boolean, else string) and empty cells are omitted.
///
/// Row numbers in errors count data rows from 1 (the header is not a row).
EventLog parse_csv(std::string_view text, const CsvMapping& mapping, std::string name = {});
EventLog parse_csv(std::istream& input, const CsvMapping& mapping, std::string name = {});

}  // namespace cpm
