#include "cpm/filtering.hpp"

#include <algorithm>
#include <cmath>

#include "cpm/error.hpp"

namespace cpm {

std::string_view to_string(WindowMode mode) {
  return mode == WindowMode::Contained ? "contained" : "intersecting";
}

std::optional<WindowMode> window_mode_from_string(std::string_view name) {
  if (name == "contained") return WindowMode::Contained;
  if (name == "intersecting") return WindowMode::Intersecting;
  return std::nullopt;
}

void FilterSpec::validate() const {
  for (std::size_t i = 0; i < attribute_clauses.size(); ++i) {
    const auto& c = attribute_clauses[i];
    if (c.key.empty()) throw ValidationError("attribute_clauses[" + std::to_string(i) + "]: empty key");
    if (c.allowed_values.empty())
      throw ValidationError("attribute_clauses[" + std::to_string(i) + "] (" + c.key +
                            "): allowed_values must not be empty");
  }
  if (time_window && !(time_window->start < time_window->end))
    throw ValidationError("time_window: start must be before end");
}

std::string FilterSpec::describe() const {
  if (empty()) return "all cases";
  std::string out;
  const auto sep = [&] {
    if (!out.empty()) out += " ∧ ";
  };
  for (const auto& c : attribute_clauses) {
    sep();
    out += c.key;
    if (c.level == AttributeLevel::Event) out += " (event)";
    out += " ∈ {";
    bool first = true;
    for (const auto& v : c.allowed_values) {
      if (!first) out += ", ";
      out += to_display_string(v);
      first = false;
    }
    out += "}";
  }
  if (time_window) {
    sep();
    out += time_window->mode == WindowMode::Contained ? "time ⊆ [" : "time ∩ [";
    out += format_iso8601(time_window->start) + ", " + format_iso8601(time_window->end) + ")";
  }
  return out;
}

namespace {

// Allowed values brought to the attribute's schema type so that, e.g., a
// JSON integer matches a float attribute and an ISO string matches a date.
std::vector<Scalar> normalize_allowed(const AttributeClause& clause, ScalarType type, std::size_t index) {
  std::vector<Scalar> out;
  for (const auto& v : clause.allowed_values) {
    if (type == ScalarType::Date) {
      if (const auto* s = std::get_if<std::string>(&v)) {
        const auto ts = parse_iso8601(*s);
        if (!ts)
          throw ValidationError("attribute_clauses[" + std::to_string(index) + "] (" + clause.key +
                                "): '" + *s + "' is not a date");
        out.emplace_back(*ts);
        continue;
      }
    }
    if (type == ScalarType::Float) {
      if (const auto* i = std::get_if<std::int64_t>(&v)) {
        out.emplace_back(static_cast<double>(*i));
        continue;
      }
    }
    if (type == ScalarType::Int) {
      if (const auto* d = std::get_if<double>(&v); d && std::trunc(*d) == *d) {
        out.emplace_back(static_cast<std::int64_t>(*d));
        continue;
      }
    }
    out.push_back(v);
  }
  return out;
}

struct PreparedClause {
  const std::string* key;
  AttributeLevel level;
  std::vector<Scalar> allowed;

  bool matches(const AttributeMap& attributes) const {
    const auto it = attributes.find(*key);
    if (it == attributes.end()) return false;
    return std::any_of(allowed.begin(), allowed.end(),
                       [&](const Scalar& a) { return scalar_equivalent(it->second, a); });
  }

  bool keeps(const Trace& trace) const {
    if (level == AttributeLevel::Case) return matches(trace.attributes);
    return std::any_of(trace.events.begin(), trace.events.end(),
                       [&](const Event& e) { return matches(e.attributes); });
  }
};

bool window_keeps(const TimeWindow& w, const Trace& trace) {
  if (w.mode == WindowMode::Contained)
    return w.contains(trace.events.front().timestamp) && w.contains(trace.events.back().timestamp);
  return std::any_of(trace.events.begin(), trace.events.end(),
                     [&](const Event& e) { return w.contains(e.timestamp); });
}

}  // namespace

EventLog apply_filter(const EventLog& log, const FilterSpec& spec) {
  spec.validate();
  // An empty log has no schema to check against; the result is empty either way.
  if (log.empty()) return log;

  std::vector<PreparedClause> clauses;
  for (std::size_t i = 0; i < spec.attribute_clauses.size(); ++i) {
    const auto& c = spec.attribute_clauses[i];
    const auto it = log.schema().find(AttributeKey{c.level, c.key});
    if (it == log.schema().end()) {
      const AttributeLevel other = c.level == AttributeLevel::Case ? AttributeLevel::Event : AttributeLevel::Case;
      const bool at_other_level = log.schema().count(AttributeKey{other, c.key}) > 0;
      throw ValidationError("attribute_clauses[" + std::to_string(i) + "] (" + c.key + "): " +
                            (at_other_level ? "attribute exists only at " + std::string(to_string(other)) +
                                                  " level, not " + std::string(to_string(c.level))
                                            : std::string("unknown attribute key")));
    }
    clauses.push_back({&c.key, c.level, normalize_allowed(c, it->second.type, i)});
  }

  std::vector<Trace> kept;
  for (const auto& trace : log.traces()) {
    if (spec.time_window && !window_keeps(*spec.time_window, trace)) continue;
    if (!std::all_of(clauses.begin(), clauses.end(), [&](const PreparedClause& c) { return c.keeps(trace); }))
      continue;
    kept.push_back(trace);
  }
  return EventLog(log.name(), std::move(kept));
}

FilterOptions describe_filter_options(const EventLog& log) {
  std::map<AttributeKey, std::map<Scalar, std::size_t>> counts;
  std::optional<std::pair<Timestamp, Timestamp>> range;
  for (const auto& trace : log.traces()) {
    for (const auto& [key, value] : trace.attributes) ++counts[{AttributeLevel::Case, key}][value];
    for (const auto& event : trace.events) {
      for (const auto& [key, value] : event.attributes) ++counts[{AttributeLevel::Event, key}][value];
      if (!range) range.emplace(event.timestamp, event.timestamp);
      range->first = std::min(range->first, event.timestamp);
      range->second = std::max(range->second, event.timestamp);
    }
  }

  FilterOptions out;
  out.time_range = range;
  for (auto& [key, value_counts] : counts) {
    AttributeOptions opt;
    opt.key = key;
    opt.type = log.schema().at(key).type;
    opt.distinct_count = value_counts.size();

    if (opt.type == ScalarType::Int || opt.type == ScalarType::Float || opt.type == ScalarType::Date) {
      // Single-typed key, so the map's first/last entries are min/max.
      opt.min = value_counts.begin()->first;
      opt.max = value_counts.rbegin()->first;
    }

    std::vector<ValueCount> all;
    all.reserve(value_counts.size());
    for (const auto& [v, n] : value_counts) all.push_back({v, n});
    std::stable_sort(all.begin(), all.end(),
                     [](const ValueCount& a, const ValueCount& b) { return a.count > b.count; });
    if (all.size() > AttributeOptions::kMaxValues) {
      all.resize(AttributeOptions::kMaxValues);
      opt.truncated = true;
    }
    opt.values = std::move(all);
    out.attributes.push_back(std::move(opt));
  }
  return out;
}

}  // namespace cpm
