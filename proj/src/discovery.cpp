#include "cpm/discovery.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "cpm/error.hpp"

namespace cpm {

Dfg discover_dfg(const EventLog& log) {
  Dfg dfg;
  dfg.source_case_count = log.case_count();
  std::map<Edge, std::vector<Millis::rep>> samples;

  for (const auto& trace : log.traces()) {
    const auto& events = trace.events;
    std::set<std::string_view> seen_in_case;
    for (std::size_t i = 0; i < events.size(); ++i) {
      auto& node = dfg.nodes[events[i].activity];
      ++node.frequency;
      if (seen_in_case.insert(events[i].activity).second) ++node.case_coverage;
      if (i + 1 < events.size())
        samples[{events[i].activity, events[i + 1].activity}].push_back(
            (events[i + 1].timestamp - events[i].timestamp).count());
    }
    ++dfg.start_activities[events.front().activity];
    ++dfg.end_activities[events.back().activity];
  }

  for (auto& [edge, durations] : samples) {
    std::sort(durations.begin(), durations.end());
    const std::size_t n = durations.size();
    const auto total = std::accumulate(durations.begin(), durations.end(), Millis::rep{0});
    EdgeStats stats;
    stats.frequency = n;
    stats.mean_s = static_cast<double>(total) / static_cast<double>(n) / 1000.0;
    stats.median_s = n % 2 == 1
                         ? static_cast<double>(durations[n / 2]) / 1000.0
                         : (static_cast<double>(durations[n / 2 - 1]) + static_cast<double>(durations[n / 2])) /
                               2000.0;
    stats.min_s = static_cast<double>(durations.front()) / 1000.0;
    stats.max_s = static_cast<double>(durations.back()) / 1000.0;
    dfg.edges.emplace(edge, stats);
  }
  return dfg;
}

std::string_view to_string(DurationStatistic statistic) {
  switch (statistic) {
    case DurationStatistic::Mean: return "mean";
    case DurationStatistic::Median: return "median";
    case DurationStatistic::Min: return "min";
    case DurationStatistic::Max: return "max";
  }
  return "mean";
}

DurationStatistic duration_statistic_from_string(std::string_view name) {
  if (name == "mean") return DurationStatistic::Mean;
  if (name == "median") return DurationStatistic::Median;
  if (name == "min") return DurationStatistic::Min;
  if (name == "max") return DurationStatistic::Max;
  throw ValidationError("unknown duration statistic '" + std::string(name) +
                        "' (expected mean, median, min or max)");
}

double edge_duration(const EdgeStats& edge, DurationStatistic statistic) {
  switch (statistic) {
    case DurationStatistic::Mean: return edge.mean_s;
    case DurationStatistic::Median: return edge.median_s;
    case DurationStatistic::Min: return edge.min_s;
    case DurationStatistic::Max: return edge.max_s;
  }
  return edge.mean_s;
}

std::map<Edge, double> dfg_performance_view(const Dfg& dfg, DurationStatistic statistic) {
  std::map<Edge, double> out;
  for (const auto& [edge, stats] : dfg.edges) out.emplace(edge, edge_duration(stats, statistic));
  return out;
}

std::map<Edge, double> dfg_performance_view(const Dfg& dfg, std::string_view statistic) {
  return dfg_performance_view(dfg, duration_statistic_from_string(statistic));
}

Metric Metric::parse(std::string_view name) {
  if (name == "frequency") return frequency();
  try {
    return duration(duration_statistic_from_string(name));
  } catch (const ValidationError&) {
    throw ValidationError("unknown metric '" + std::string(name) +
                          "' (expected frequency, mean, median, min or max)");
  }
}

std::string_view Metric::name() const { return statistic_ ? to_string(*statistic_) : "frequency"; }

double Metric::edge_value(const EdgeStats& edge) const {
  return statistic_ ? edge_duration(edge, *statistic_) : static_cast<double>(edge.frequency);
}

}  // namespace cpm
