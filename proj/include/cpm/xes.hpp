#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "cpm/event_log.hpp"

namespace cpm {

/// Reads the flat XES profile: <log> holding <trace>s holding <event>s,
/// with string/date/int/float/boolean/id attribute elements. Traces need
/// `concept:name` (case id); events need `concept:name` (activity) and
/// `time:timestamp`. Extension, global and classifier declarations are
/// skipped. `id` attributes are kept as strings; list/container
/// attributes and nested meta-attributes are rejected.
///
/// Throws ParseError for malformed XML and IngestionError for content
/// that does not fit the event-log model.
EventLog parse_xes(std::string_view document);
EventLog parse_xes(std::istream& input);

std::string write_xes(const EventLog& log);
void write_xes(const EventLog& log, std::ostream& out);

}  // namespace cpm
