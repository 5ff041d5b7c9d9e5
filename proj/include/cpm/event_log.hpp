#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cpm/scalar.hpp"
#include "cpm/time.hpp"

namespace cpm {

struct Event {
  std::string activity;
  Timestamp timestamp;
  AttributeMap attributes;

  friend bool operator==(const Event&, const Event&) = default;
};

struct Trace {
  std::string case_id;
  AttributeMap attributes;
  std::vector<Event> events;

  friend bool operator==(const Trace&, const Trace&) = default;
};

enum class AttributeLevel { Case, Event };

std::string_view to_string(AttributeLevel level);
/// Accepts "case" / "trace" and "event".
std::optional<AttributeLevel> attribute_level_from_string(std::string_view name);

struct AttributeKey {
  AttributeLevel level;
  std::string name;

  friend auto operator<=>(const AttributeKey&, const AttributeKey&) = default;
};

struct AttributeInfo {
  ScalarType type = ScalarType::String;
  /// Smallest distinct values in Scalar order, at most kSampleSize of them.
  std::vector<Scalar> sample;

  static constexpr std::size_t kSampleSize = 20;

  friend bool operator==(const AttributeInfo&, const AttributeInfo&) = default;
};

/// Every (level, key) pair observed in the log. A key used on both traces
/// and events yields two entries.
using AttributeSchema = std::map<AttributeKey, AttributeInfo>;

/// Immutable event log. Construction sorts each trace's events by
/// timestamp (stable), rejects empty traces, duplicate or empty case ids
/// and empty activity labels, and derives the attribute schema.
class EventLog {
public:
  EventLog() = default;
  EventLog(std::string name, std::vector<Trace> traces);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Trace>& traces() const noexcept { return traces_; }
  const AttributeSchema& schema() const noexcept { return schema_; }

  std::size_t case_count() const noexcept { return traces_.size(); }
  std::size_t event_count() const noexcept;
  bool empty() const noexcept { return traces_.empty(); }

  friend bool operator==(const EventLog&, const EventLog&) = default;

private:
  std::string name_;
  std::vector<Trace> traces_;
  AttributeSchema schema_;
};

using Variant = std::vector<std::string>;

/// Distinct activity sequences and the number of cases following each.
std::map<Variant, std::size_t> variants(const EventLog& log);

struct LogStatistics {
  std::size_t case_count = 0;
  std::size_t variant_count = 0;
  std::size_t event_count = 0;
  /// Mean of (last - first event timestamp) per case; 0 for an empty log.
  double avg_case_duration_s = 0.0;

  friend bool operator==(const LogStatistics&, const LogStatistics&) = default;
};

LogStatistics log_statistics(const EventLog& log);

}  // namespace cpm
