#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace cpm {

/// UTC instant with millisecond resolution. Zone offsets are folded in at
/// parse time and not retained.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Millis = std::chrono::milliseconds;

/// Parses ISO-8601 date-times such as `2020-01-01T00:00:00Z`,
/// `2020-01-01T01:00:00.250+01:00` or `2020-01-01 00:00:00`. A missing
/// offset is read as UTC; a bare date is midnight UTC. Fractional seconds
/// beyond millisecond precision are truncated.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Always `YYYY-MM-DDTHH:MM:SS.mmmZ`.
std::string format_iso8601(Timestamp ts);

/// strftime-style parsing. Supported conversions: %Y %m %d %H %M %S %f
/// (fraction digits) %z (Z, +hh, +hhmm, +hh:mm) %F %T %b (English month
/// abbreviation) %%. Whitespace in the pattern matches any run of
/// whitespace. An empty pattern or "ISO8601" delegates to parse_iso8601.
std::optional<Timestamp> parse_with_format(std::string_view text, std::string_view format);

/// Duration in seconds as a double.
inline double to_seconds(Millis d) { return static_cast<double>(d.count()) / 1000.0; }

}  // namespace cpm
