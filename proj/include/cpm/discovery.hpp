#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "cpm/event_log.hpp"

namespace cpm {

/// Directly-follows pair (source activity, target activity).
using Edge = std::pair<std::string, std::string>;

struct NodeStats {
  std::size_t frequency = 0;
  std::size_t case_coverage = 0;

  friend bool operator==(const NodeStats&, const NodeStats&) = default;
};

/// Durations are seconds between the source and target event timestamps.
struct EdgeStats {
  std::size_t frequency = 0;
  double mean_s = 0.0;
  double median_s = 0.0;
  double min_s = 0.0;
  double max_s = 0.0;

  friend bool operator==(const EdgeStats&, const EdgeStats&) = default;
};

struct Dfg {
  std::map<std::string, NodeStats> nodes;
  std::map<Edge, EdgeStats> edges;
  std::map<std::string, std::size_t> start_activities;
  std::map<std::string, std::size_t> end_activities;
  std::size_t source_case_count = 0;

  bool empty() const { return nodes.empty(); }

  friend bool operator==(const Dfg&, const Dfg&) = default;
};

Dfg discover_dfg(const EventLog& log);

enum class DurationStatistic { Mean, Median, Min, Max };

std::string_view to_string(DurationStatistic statistic);
/// Throws ValidationError for names other than mean/median/min/max.
DurationStatistic duration_statistic_from_string(std::string_view name);

double edge_duration(const EdgeStats& edge, DurationStatistic statistic);

std::map<Edge, double> dfg_performance_view(const Dfg& dfg, DurationStatistic statistic);
std::map<Edge, double> dfg_performance_view(const Dfg& dfg, std::string_view statistic);

/// What an edge label shows: the raw frequency or one duration statistic.
class Metric {
public:
  static Metric frequency() { return Metric{}; }
  static Metric duration(DurationStatistic s) { return Metric{s}; }
  /// "frequency", "mean", "median", "min" or "max"; ValidationError otherwise.
  static Metric parse(std::string_view name);

  bool is_frequency() const { return !statistic_; }
  DurationStatistic statistic() const { return *statistic_; }
  std::string_view name() const;

  /// Frequency count or duration in seconds.
  double edge_value(const EdgeStats& edge) const;

  friend bool operator==(const Metric&, const Metric&) = default;

private:
  Metric() = default;
  explicit Metric(DurationStatistic s) : statistic_(s) {}

  std::optional<DurationStatistic> statistic_;
};

}  // namespace cpm
