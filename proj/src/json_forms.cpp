#include "cpm/json_forms.hpp"

#include <cmath>

#include "cpm/error.hpp"

namespace cpm {

Json scalar_to_json(const Scalar& value) {
  struct Visitor {
    Json operator()(const std::string& s) const { return s; }
    Json operator()(std::int64_t v) const { return v; }
    Json operator()(double v) const { return v; }
    Json operator()(bool v) const { return v; }
    Json operator()(Timestamp t) const { return format_iso8601(t); }
  };
  return std::visit(Visitor{}, value);
}

Scalar scalar_from_json(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>();
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) return value.get<double>();
  throw ValidationError("expected a string, number or boolean, got " + value.dump());
}

Json filter_to_json(const FilterSpec& spec) {
  Json clauses = Json::array();
  for (const auto& c : spec.attribute_clauses) {
    Json values = Json::array();
    for (const auto& v : c.allowed_values) values.push_back(scalar_to_json(v));
    clauses.push_back({{"key", c.key}, {"level", to_string(c.level)}, {"allowed_values", std::move(values)}});
  }
  Json window = nullptr;
  if (spec.time_window) {
    window = {{"start", format_iso8601(spec.time_window->start)},
              {"end", format_iso8601(spec.time_window->end)},
              {"mode", to_string(spec.time_window->mode)}};
  }
  return {{"attribute_clauses", std::move(clauses)}, {"time_window", std::move(window)}};
}

namespace {

const Json& require(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing '" + key + "'");
  return *it;
}

std::string require_string(const Json& obj, const char* key, const std::string& where) {
  const Json& v = require(obj, key, where);
  if (!v.is_string()) throw ValidationError(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

Timestamp require_instant(const Json& obj, const char* key, const std::string& where) {
  const std::string text = require_string(obj, key, where);
  const auto ts = parse_iso8601(text);
  if (!ts) throw ValidationError(where + ": '" + key + "' is not an ISO-8601 instant: " + text);
  return *ts;
}

Json edge_json(const Edge& e) { return {{"source", e.first}, {"target", e.second}}; }

template <typename Set>
Json string_array(const Set& s) {
  Json out = Json::array();
  for (const auto& v : s) out.push_back(v);
  return out;
}

Json edge_array(const std::set<Edge>& edges) {
  Json out = Json::array();
  for (const auto& e : edges) out.push_back(edge_json(e));
  return out;
}

}  // namespace

FilterSpec filter_from_json(const Json& json) {
  if (json.is_null()) return {};
  if (!json.is_object()) throw ValidationError("filter must be a JSON object");
  FilterSpec spec;
  if (const auto it = json.find("attribute_clauses"); it != json.end() && !it->is_null()) {
    if (!it->is_array()) throw ValidationError("attribute_clauses must be an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& c = (*it)[i];
      const std::string where = "attribute_clauses[" + std::to_string(i) + "]";
      if (!c.is_object()) throw ValidationError(where + " must be an object");
      AttributeClause clause;
      clause.key = require_string(c, "key", where);
      const std::string level = c.contains("level") ? require_string(c, "level", where) : "case";
      const auto parsed_level = attribute_level_from_string(level);
      if (!parsed_level) throw ValidationError(where + ": level must be 'case' or 'event', got '" + level + "'");
      clause.level = *parsed_level;
      const Json& values = require(c, "allowed_values", where);
      if (!values.is_array()) throw ValidationError(where + ": allowed_values must be an array");
      for (const auto& v : values) clause.allowed_values.insert(scalar_from_json(v));
      spec.attribute_clauses.push_back(std::move(clause));
    }
  }
  if (const auto it = json.find("time_window"); it != json.end() && !it->is_null()) {
    if (!it->is_object()) throw ValidationError("time_window must be an object");
    TimeWindow w;
    w.start = require_instant(*it, "start", "time_window");
    w.end = require_instant(*it, "end", "time_window");
    if (it->contains("mode")) {
      const std::string mode = require_string(*it, "mode", "time_window");
      const auto m = window_mode_from_string(mode);
      if (!m) throw ValidationError("time_window: mode must be 'contained' or 'intersecting', got '" + mode + "'");
      w.mode = *m;
    }
    spec.time_window = w;
  }
  spec.validate();
  return spec;
}

Json dfg_to_json(const Dfg& dfg) {
  Json nodes = Json::object();
  for (const auto& [activity, stats] : dfg.nodes)
    nodes[activity] = {{"frequency", stats.frequency}, {"case_coverage", stats.case_coverage}};
  Json edges = Json::array();
  for (const auto& [edge, stats] : dfg.edges) {
    edges.push_back({{"source", edge.first},
                     {"target", edge.second},
                     {"frequency", stats.frequency},
                     {"mean_s", stats.mean_s},
                     {"median_s", stats.median_s},
                     {"min_s", stats.min_s},
                     {"max_s", stats.max_s}});
  }
  Json starts = Json::object();
  for (const auto& [a, n] : dfg.start_activities) starts[a] = n;
  Json ends = Json::object();
  for (const auto& [a, n] : dfg.end_activities) ends[a] = n;
  return {{"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"start_activities", std::move(starts)},
          {"end_activities", std::move(ends)},
          {"source_case_count", dfg.source_case_count}};
}

Json statistics_to_json(const LogStatistics& stats) {
  return {{"case_count", stats.case_count},
          {"variant_count", stats.variant_count},
          {"event_count", stats.event_count},
          {"avg_case_duration_s", stats.avg_case_duration_s}};
}

Json slice_to_json(const ModelSlice& slice) {
  return {{"label", slice.label},
          {"filter", filter_to_json(slice.filter)},
          {"filter_description", slice.filter.describe()},
          {"empty", slice.dfg.empty()},
          {"dfg", dfg_to_json(slice.dfg)},
          {"statistics", statistics_to_json(slice.statistics)}};
}

Json filter_options_to_json(const FilterOptions& options) {
  Json attributes = Json::array();
  for (const auto& a : options.attributes) {
    Json values = Json::array();
    for (const auto& vc : a.values) values.push_back({{"value", scalar_to_json(vc.value)}, {"count", vc.count}});
    Json entry = {{"key", a.key.name},
                  {"level", to_string(a.key.level)},
                  {"type", to_string(a.type)},
                  {"values", std::move(values)},
                  {"distinct_count", a.distinct_count},
                  {"truncated", a.truncated}};
    if (a.min) entry["min"] = scalar_to_json(*a.min);
    if (a.max) entry["max"] = scalar_to_json(*a.max);
    attributes.push_back(std::move(entry));
  }
  Json range = nullptr;
  if (options.time_range)
    range = {{"min", format_iso8601(options.time_range->first)}, {"max", format_iso8601(options.time_range->second)}};
  return {{"attributes", std::move(attributes)}, {"time_range", std::move(range)}};
}

namespace {

Json side_json(const ComparisonResult& result, Side side, const Metric& metric) {
  const ModelSlice& slice = side == Side::Left ? result.left : result.right;
  const Highlight h = highlight_classes(result, side);
  Json node_classes = Json::object();
  for (const auto& [activity, cls] : h.nodes) node_classes[activity] = to_string(cls);
  Json edge_classes = Json::array();
  for (const auto& [edge, cls] : h.edges) {
    Json e = edge_json(edge);
    e["class"] = to_string(cls);
    e["value"] = metric.edge_value(slice.dfg.edges.at(edge));
    edge_classes.push_back(std::move(e));
  }
  Json out = slice_to_json(slice);
  out["highlight"] = {{"nodes", std::move(node_classes)}, {"edges", std::move(edge_classes)}};
  return out;
}

}  // namespace

Json comparison_to_json(const ComparisonResult& result, const Metric& metric) {
  const StatisticsDelta d = statistics_delta(result.left.statistics, result.right.statistics);
  const Json difference = {{"case_count", d.case_count},
                           {"variant_count", d.variant_count},
                           {"event_count", d.event_count},
                           {"avg_case_duration_s", d.avg_case_duration_s}};
  const Json absolute = {{"case_count", std::llabs(d.case_count)},
                         {"variant_count", std::llabs(d.variant_count)},
                         {"event_count", std::llabs(d.event_count)},
                         {"avg_case_duration_s", std::fabs(d.avg_case_duration_s)}};
  return {{"created_at", format_iso8601(result.created_at)},
          {"metric", metric.name()},
          {"left", side_json(result, Side::Left, metric)},
          {"right", side_json(result, Side::Right, metric)},
          {"common_activities", string_array(result.common_activities)},
          {"unique_activities_left", string_array(result.unique_activities_left)},
          {"unique_activities_right", string_array(result.unique_activities_right)},
          {"common_edges", edge_array(result.common_edges)},
          {"unique_edges_left", edge_array(result.unique_edges_left)},
          {"unique_edges_right", edge_array(result.unique_edges_right)},
          {"statistics",
           {{"left", statistics_to_json(result.left.statistics)},
            {"right", statistics_to_json(result.right.statistics)},
            {"difference", difference},
            {"absolute_difference", absolute}}}};
}

CsvMapping csv_mapping_from_json(const Json& json) {
  CsvMapping m;
  if (json.is_null()) return m;
  if (!json.is_object()) throw ValidationError("CSV mapping must be a JSON object");
  const auto read = [&](const char* key, std::string& field) {
    if (const auto it = json.find(key); it != json.end()) {
      if (!it->is_string()) throw ValidationError(std::string("CSV mapping: '") + key + "' must be a string");
      field = it->get<std::string>();
    }
  };
  read("case_column", m.case_column);
  read("activity_column", m.activity_column);
  read("timestamp_column", m.timestamp_column);
  read("timestamp_format", m.timestamp_format);
  return m;
}

Json csv_mapping_to_json(const CsvMapping& mapping) {
  return {{"case_column", mapping.case_column},
          {"activity_column", mapping.activity_column},
          {"timestamp_column", mapping.timestamp_column},
          {"timestamp_format", mapping.timestamp_format}};
}

}  // namespace cpm
