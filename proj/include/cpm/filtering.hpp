#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cpm/event_log.hpp"

namespace cpm {

struct AttributeClause {
  std::string key;
  AttributeLevel level = AttributeLevel::Case;
  std::set<Scalar> allowed_values;

  friend bool operator==(const AttributeClause&, const AttributeClause&) = default;
};

enum class WindowMode { Contained, Intersecting };

std::string_view to_string(WindowMode mode);
std::optional<WindowMode> window_mode_from_string(std::string_view name);

/// Half-open [start, end).
struct TimeWindow {
  Timestamp start;
  Timestamp end;
  WindowMode mode = WindowMode::Intersecting;

  bool contains(Timestamp t) const { return start <= t && t < end; }

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Conjunction of attribute clauses and an optional time window.
struct FilterSpec {
  std::vector<AttributeClause> attribute_clauses;
  std::optional<TimeWindow> time_window;

  bool empty() const { return attribute_clauses.empty() && !time_window; }

  /// Checks the structural invariants (non-empty value sets, start < end).
  void validate() const;

  /// Short human description, e.g. "ward ∈ {ICU} ∧ time ∩ [2020-03-01…, 2020-06-01…)".
  std::string describe() const;

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// Keeps whole traces. A case clause tests the trace attribute; an event
/// clause keeps the trace when at least one event matches. `Contained`
/// keeps traces whose first and last events fall inside the window,
/// `Intersecting` those with any event inside it.
///
/// Throws ValidationError when a clause names a key absent from the log
/// schema at the given level, or when the spec itself is invalid. The
/// schema check is skipped for an empty log, so filtering is idempotent.
EventLog apply_filter(const EventLog& log, const FilterSpec& spec);

struct ValueCount {
  Scalar value;
  std::size_t count = 0;
};

struct AttributeOptions {
  AttributeKey key;
  ScalarType type = ScalarType::String;
  /// Most frequent first, ties in value order; at most kMaxValues entries.
  std::vector<ValueCount> values;
  std::size_t distinct_count = 0;
  bool truncated = false;
  /// Only for int, float and date attributes.
  std::optional<Scalar> min;
  std::optional<Scalar> max;

  static constexpr std::size_t kMaxValues = 200;
};

struct FilterOptions {
  std::vector<AttributeOptions> attributes;
  /// Earliest and latest event timestamps; absent for an empty log.
  std::optional<std::pair<Timestamp, Timestamp>> time_range;
};

/// Menu of filterable columns: for case attributes counts are traces, for
/// event attributes counts are events.
FilterOptions describe_filter_options(const EventLog& log);

}  // namespace cpm
