#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "cpm/discovery.hpp"
#include "cpm/event_log.hpp"
#include "cpm/filtering.hpp"

namespace cpm {

/// One side of a comparison: a filtered view of a log and its model.
struct ModelSlice {
  std::string label;
  FilterSpec filter;
  Dfg dfg;
  LogStatistics statistics;

  friend bool operator==(const ModelSlice&, const ModelSlice&) = default;
};

/// Filters, discovers and measures in one step so that dfg and statistics
/// always come from the same filtered log.
ModelSlice make_slice(const EventLog& log, std::string label, FilterSpec filter);

struct ComparisonResult {
  ModelSlice left;
  ModelSlice right;
  std::set<std::string> common_activities;
  std::set<std::string> unique_activities_left;
  std::set<std::string> unique_activities_right;
  std::set<Edge> common_edges;
  std::set<Edge> unique_edges_left;
  std::set<Edge> unique_edges_right;
  Timestamp created_at;

  friend bool operator==(const ComparisonResult&, const ComparisonResult&) = default;
};

/// Structural diff by activity label; metric values never affect
/// membership. Exactly two models by construction.
ComparisonResult compare(ModelSlice left, ModelSlice right, Timestamp created_at);
ComparisonResult compare(ModelSlice left, ModelSlice right);

enum class Side { Left, Right };
enum class ElementClass { Common, Unique };

std::string_view to_string(Side side);
std::string_view to_string(ElementClass cls);

struct Highlight {
  std::map<std::string, ElementClass> nodes;
  std::map<Edge, ElementClass> edges;

  friend bool operator==(const Highlight&, const Highlight&) = default;
};

/// Class for every node and edge of the chosen side's model.
Highlight highlight_classes(const ComparisonResult& result, Side side);

/// Right minus left.
struct StatisticsDelta {
  long long case_count = 0;
  long long variant_count = 0;
  long long event_count = 0;
  double avg_case_duration_s = 0.0;
};

StatisticsDelta statistics_delta(const LogStatistics& left, const LogStatistics& right);

/// Colour used for elements classed Unique in every rendering.
inline constexpr std::string_view kUniqueColor = "#d62728";
inline constexpr std::string_view kUniqueCssClass = "unique";

}  // namespace cpm
