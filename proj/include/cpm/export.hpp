#pragma once

#include <optional>
#include <string>

#include "cpm/comparison.hpp"
#include "cpm/discovery.hpp"
#include "cpm/event_log.hpp"

namespace cpm {

/// Graphviz digraph with nodes and edges in lexicographic order. Nodes are
/// labelled "activity (frequency)"; edges carry the metric (a count, or
/// seconds with one decimal). Elements classed Unique in `highlight` get
/// the red colour; missing entries count as Common. Throws ValidationError
/// if `highlight` names an element that is not in the graph.
std::string export_dot(const Dfg& dfg, const Metric& metric, const std::optional<Highlight>& highlight = std::nullopt);

/// Self-contained printable HTML page: both models side by side as inline
/// SVG with unique elements in red, the statistics table between them,
/// filter descriptions and the creation time. Elements drawn red carry
/// class="unique" plus data-side, data-kind (node|edge) and data-label
/// attributes; edge labels are "source→target".
std::string export_comparison_report(const ComparisonResult& result, const Metric& metric);

/// `variant,case_count` rows, variant activities joined with "→", sorted by
/// descending count then variant text.
std::string export_variants_csv(const EventLog& log);

/// Text used for an edge in reports and variant strings.
std::string edge_label(const Edge& edge);

/// Edge label text for a metric: "12" or "60.0s".
std::string format_metric_value(const Metric& metric, double value);

}  // namespace cpm
