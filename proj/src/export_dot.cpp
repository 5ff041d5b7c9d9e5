#include <cstdio>

#include "cpm/error.hpp"
#include "cpm/export.hpp"

namespace cpm {
namespace {

std::string quote(std::string_view id) {
  std::string out = "\"";
  for (const char c : id) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_metric_value(const Metric& metric, double value) {
  if (metric.is_frequency()) return std::to_string(static_cast<long long>(value));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1fs", value);
  return buf;
}

std::string export_dot(const Dfg& dfg, const Metric& metric, const std::optional<Highlight>& highlight) {
  if (highlight) {
    for (const auto& [activity, cls] : highlight->nodes)
      if (!dfg.nodes.count(activity))
        throw ValidationError("highlight references unknown activity '" + activity + "'");
    for (const auto& [edge, cls] : highlight->edges)
      if (!dfg.edges.count(edge)) throw ValidationError("highlight references unknown edge " + edge_label(edge));
  }
  const auto node_unique = [&](const std::string& a) {
    if (!highlight) return false;
    const auto it = highlight->nodes.find(a);
    return it != highlight->nodes.end() && it->second == ElementClass::Unique;
  };
  const auto edge_unique = [&](const Edge& e) {
    if (!highlight) return false;
    const auto it = highlight->edges.find(e);
    return it != highlight->edges.end() && it->second == ElementClass::Unique;
  };
  const std::string red = quote(kUniqueColor);

  std::string out = "digraph dfg {\n"
                    "  rankdir=LR;\n"
                    "  node [shape=box, style=\"rounded,filled\", fillcolor=\"#f7f7f7\", fontname=\"Helvetica\"];\n"
                    "  edge [fontname=\"Helvetica\", fontsize=10];\n";
  for (const auto& [activity, stats] : dfg.nodes) {
    out += "  " + quote(activity) + " [label=" + quote(activity + " (" + std::to_string(stats.frequency) + ")");
    if (node_unique(activity)) out += ", color=" + red + ", fontcolor=" + red + ", penwidth=2";
    out += "];\n";
  }
  for (const auto& [edge, stats] : dfg.edges) {
    out += "  " + quote(edge.first) + " -> " + quote(edge.second) +
           " [label=" + quote(format_metric_value(metric, metric.edge_value(stats)));
    if (edge_unique(edge)) out += ", color=" + red + ", fontcolor=" + red + ", style=dashed";
    out += "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace cpm
