#include "cpm/comparison.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iterator>

namespace cpm {

ModelSlice make_slice(const EventLog& log, std::string label, FilterSpec filter) {
  const EventLog filtered = apply_filter(log, filter);
  return ModelSlice{std::move(label), std::move(filter), discover_dfg(filtered), log_statistics(filtered)};
}

namespace {

template <typename Key, typename Value>
std::set<Key> key_set(const std::map<Key, Value>& m) {
  std::set<Key> out;
  for (const auto& kv : m) out.insert(out.end(), kv.first);
  return out;
}

template <typename T>
void split(const std::set<T>& left, const std::set<T>& right, std::set<T>& common, std::set<T>& only_left,
           std::set<T>& only_right) {
  std::set_intersection(left.begin(), left.end(), right.begin(), right.end(), std::inserter(common, common.end()));
  std::set_difference(left.begin(), left.end(), right.begin(), right.end(),
                      std::inserter(only_left, only_left.end()));
  std::set_difference(right.begin(), right.end(), left.begin(), left.end(),
                      std::inserter(only_right, only_right.end()));
}

}  // namespace

ComparisonResult compare(ModelSlice left, ModelSlice right, Timestamp created_at) {
  ComparisonResult r;
  split(key_set(left.dfg.nodes), key_set(right.dfg.nodes), r.common_activities, r.unique_activities_left,
        r.unique_activities_right);
  split(key_set(left.dfg.edges), key_set(right.dfg.edges), r.common_edges, r.unique_edges_left,
        r.unique_edges_right);
  r.left = std::move(left);
  r.right = std::move(right);
  r.created_at = created_at;
  return r;
}

ComparisonResult compare(ModelSlice left, ModelSlice right) {
  return compare(std::move(left), std::move(right),
                 std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now()));
}

std::string_view to_string(Side side) { return side == Side::Left ? "left" : "right"; }
std::string_view to_string(ElementClass cls) { return cls == ElementClass::Common ? "common" : "unique"; }

Highlight highlight_classes(const ComparisonResult& result, Side side) {
  const ModelSlice& slice = side == Side::Left ? result.left : result.right;
  const auto& unique_nodes = side == Side::Left ? result.unique_activities_left : result.unique_activities_right;
  const auto& unique_edges = side == Side::Left ? result.unique_edges_left : result.unique_edges_right;
  Highlight h;
  for (const auto& [activity, stats] : slice.dfg.nodes)
    h.nodes.emplace(activity, unique_nodes.count(activity) ? ElementClass::Unique : ElementClass::Common);
  for (const auto& [edge, stats] : slice.dfg.edges)
    h.edges.emplace(edge, unique_edges.count(edge) ? ElementClass::Unique : ElementClass::Common);
  return h;
}

StatisticsDelta statistics_delta(const LogStatistics& left, const LogStatistics& right) {
  const auto diff = [](std::size_t a, std::size_t b) {
    return static_cast<long long>(b) - static_cast<long long>(a);
  };
  return StatisticsDelta{diff(left.case_count, right.case_count), diff(left.variant_count, right.variant_count),
                         diff(left.event_count, right.event_count),
                         right.avg_case_duration_s - left.avg_case_duration_s};
}

}  // namespace cpm
