#include "cpm/event_log.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "cpm/error.hpp"

namespace cpm {

std::string_view to_string(AttributeLevel level) {
  return level == AttributeLevel::Case ? "case" : "event";
}

std::optional<AttributeLevel> attribute_level_from_string(std::string_view name) {
  if (name == "case" || name == "trace") return AttributeLevel::Case;
  if (name == "event") return AttributeLevel::Event;
  return std::nullopt;
}

namespace {

struct SchemaAccumulator {
  ScalarType type = ScalarType::String;
  bool typed = false;
  std::set<Scalar> values;

  void add(const Scalar& v) {
    const ScalarType t = type_of(v);
    if (!typed) {
      type = t;
      typed = true;
    } else if (type != t) {
      type = ScalarType::Mixed;
    }
    values.insert(v);
  }
};

AttributeSchema build_schema(const std::vector<Trace>& traces) {
  std::map<AttributeKey, SchemaAccumulator> acc;
  for (const auto& trace : traces) {
    for (const auto& [key, value] : trace.attributes) acc[{AttributeLevel::Case, key}].add(value);
    for (const auto& event : trace.events)
      for (const auto& [key, value] : event.attributes) acc[{AttributeLevel::Event, key}].add(value);
  }
  AttributeSchema schema;
  for (auto& [key, a] : acc) {
    AttributeInfo info;
    info.type = a.type;
    for (const auto& v : a.values) {
      if (info.sample.size() == AttributeInfo::kSampleSize) break;
      info.sample.push_back(v);
    }
    schema.emplace(key, std::move(info));
  }
  return schema;
}

}  // namespace

EventLog::EventLog(std::string name, std::vector<Trace> traces)
    : name_(std::move(name)), traces_(std::move(traces)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(traces_.size());
  for (std::size_t i = 0; i < traces_.size(); ++i) {
    auto& trace = traces_[i];
    if (trace.case_id.empty())
      throw IngestionError("trace #" + std::to_string(i) + " has an empty case id");
    if (trace.events.empty()) throw IngestionError("trace '" + trace.case_id + "' has no events");
    for (std::size_t j = 0; j < trace.events.size(); ++j) {
      if (trace.events[j].activity.empty())
        throw IngestionError("trace '" + trace.case_id + "', event " + std::to_string(j) +
                             ": empty activity label");
    }
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
  }
  for (const auto& trace : traces_) {
    if (!seen.insert(trace.case_id).second)
      throw IngestionError("duplicate case id '" + trace.case_id + "'");
  }
  schema_ = build_schema(traces_);
}

std::size_t EventLog::event_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : traces_) n += t.events.size();
  return n;
}

std::map<Variant, std::size_t> variants(const EventLog& log) {
  std::map<Variant, std::size_t> out;
  for (const auto& trace : log.traces()) {
    Variant v;
    v.reserve(trace.events.size());
    for (const auto& e : trace.events) v.push_back(e.activity);
    ++out[std::move(v)];
  }
  return out;
}

LogStatistics log_statistics(const EventLog& log) {
  LogStatistics s;
  s.case_count = log.case_count();
  s.variant_count = variants(log).size();
  s.event_count = log.event_count();
  if (s.case_count == 0) return s;
  Millis total{0};
  for (const auto& trace : log.traces())
    total += trace.events.back().timestamp - trace.events.front().timestamp;
  s.avg_case_duration_s = to_seconds(total) / static_cast<double>(s.case_count);
  return s;
}

}  // namespace cpm
