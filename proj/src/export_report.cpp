#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <vector>

#include "cpm/export.hpp"

namespace cpm {
namespace {

constexpr double kColumnWidth = 230;
constexpr double kRowHeight = 72;
constexpr double kNodeWidth = 170;
constexpr double kNodeHeight = 40;
constexpr double kMargin = 30;
constexpr std::size_t kMaxLabelChars = 22;

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

// Truncates on a UTF-8 code point boundary.
std::string shorten(const std::string& s) {
  std::size_t chars = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (chars == kMaxLabelChars) return s.substr(0, i) + "…";
      ++chars;
    }
  }
  return s;
}

struct Point {
  double x;
  double y;
};

// Layered left-to-right placement: a node's column is its BFS distance from
// the start activities, rows within a column follow activity order.
std::map<std::string, Point> layout(const Dfg& dfg, double& width, double& height) {
  std::map<std::string, std::vector<std::string>> successors;
  for (const auto& [edge, stats] : dfg.edges) successors[edge.first].push_back(edge.second);

  std::map<std::string, std::size_t> layer;
  std::deque<std::string> queue;
  for (const auto& [activity, count] : dfg.start_activities) {
    layer.emplace(activity, 0);
    queue.push_back(activity);
  }
  while (!queue.empty()) {
    const std::string current = queue.front();
    queue.pop_front();
    for (const auto& next : successors[current]) {
      if (layer.emplace(next, layer[current] + 1).second) queue.push_back(next);
    }
  }
  std::map<std::size_t, std::vector<std::string>> columns;
  for (const auto& [activity, stats] : dfg.nodes) columns[layer.count(activity) ? layer[activity] : 0].push_back(activity);

  std::map<std::string, Point> pos;
  std::size_t max_rows = 0;
  std::size_t max_layer = 0;
  for (const auto& [l, names] : columns) {
    max_layer = std::max(max_layer, l);
    max_rows = std::max(max_rows, names.size());
    for (std::size_t i = 0; i < names.size(); ++i)
      pos[names[i]] = {kMargin + static_cast<double>(l) * kColumnWidth,
                       kMargin + 20 + static_cast<double>(i) * kRowHeight};
  }
  width = 2 * kMargin + static_cast<double>(max_layer) * kColumnWidth + kNodeWidth;
  height = 2 * kMargin + 40 + static_cast<double>(max_rows) * kRowHeight;
  return pos;
}

std::string render_svg(const ModelSlice& slice, const Highlight& highlight, Side side, const Metric& metric) {
  double width = 0;
  double height = 0;
  const auto pos = layout(slice.dfg, width, height);
  const std::string side_name(to_string(side));
  const std::string marker = "arrow-" + side_name;
  const std::string marker_red = "arrow-unique-" + side_name;

  std::string out = "<svg class=\"dfg\" xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + num(width) + " " +
                    num(height) + "\" role=\"img\" aria-label=\"" + escape_html(slice.label) + "\">\n";
  out += "<defs><marker id=\"" + marker +
         "\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" "
         "orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" class=\"arrowhead\"/></marker>";
  out += "<marker id=\"" + marker_red +
         "\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\" "
         "orient=\"auto-start-reverse\"><path d=\"M0,0 L10,5 L0,10 z\" class=\"arrowhead-unique\"/></marker></defs>\n";

  for (const auto& [edge, stats] : slice.dfg.edges) {
    const bool unique = highlight.edges.at(edge) == ElementClass::Unique;
    const Point a = pos.at(edge.first);
    const Point b = pos.at(edge.second);
    std::string path;
    Point label;
    if (edge.first == edge.second) {
      const double cx = a.x + kNodeWidth / 2;
      path = "M" + num(cx - 15) + "," + num(a.y) + " C" + num(cx - 30) + "," + num(a.y - 35) + " " + num(cx + 30) +
             "," + num(a.y - 35) + " " + num(cx + 15) + "," + num(a.y);
      label = {cx, a.y - 30};
    } else if (b.x > a.x) {
      const Point s{a.x + kNodeWidth, a.y + kNodeHeight / 2};
      const Point t{b.x, b.y + kNodeHeight / 2};
      const double dx = (t.x - s.x) / 2;
      path = "M" + num(s.x) + "," + num(s.y) + " C" + num(s.x + dx) + "," + num(s.y) + " " + num(t.x - dx) + "," +
             num(t.y) + " " + num(t.x) + "," + num(t.y);
      label = {(s.x + t.x) / 2, (s.y + t.y) / 2 - 4};
    } else {
      // Backward or same-column edge: arc below both nodes.
      const Point s{a.x + kNodeWidth / 2, a.y + kNodeHeight};
      const Point t{b.x + kNodeWidth / 2, b.y + kNodeHeight};
      const double dip = std::max(s.y, t.y) + 28 + std::abs(s.x - t.x) * 0.08;
      path = "M" + num(s.x) + "," + num(s.y) + " C" + num(s.x) + "," + num(dip) + " " + num(t.x) + "," + num(dip) +
             " " + num(t.x) + "," + num(t.y);
      label = {(s.x + t.x) / 2, 0.25 * (s.y + t.y) + 0.75 * dip - 2};
    }
    out += "<g class=\"edge" + std::string(unique ? " unique" : "") + "\" data-side=\"" + side_name +
           "\" data-kind=\"edge\" data-label=\"" + escape_html(edge_label(edge)) + "\"><title>" +
           escape_html(edge_label(edge)) + "</title><path d=\"" + path + "\" marker-end=\"url(#" +
           (unique ? marker_red : marker) + ")\"/><text x=\"" + num(label.x) + "\" y=\"" + num(label.y) +
           "\" text-anchor=\"middle\">" + escape_html(format_metric_value(metric, metric.edge_value(stats))) +
           "</text></g>\n";
  }

  for (const auto& [activity, stats] : slice.dfg.nodes) {
    const bool unique = highlight.nodes.at(activity) == ElementClass::Unique;
    const Point p = pos.at(activity);
    out += "<g class=\"node" + std::string(unique ? " unique" : "") + "\" data-side=\"" + side_name +
           "\" data-kind=\"node\" data-label=\"" + escape_html(activity) + "\"><title>" + escape_html(activity) +
           "</title><rect x=\"" + num(p.x) + "\" y=\"" + num(p.y) + "\" width=\"" + num(kNodeWidth) +
           "\" height=\"" + num(kNodeHeight) + "\" rx=\"8\"/><text x=\"" + num(p.x + kNodeWidth / 2) + "\" y=\"" +
           num(p.y + kNodeHeight / 2 + 4) + "\" text-anchor=\"middle\">" +
           escape_html(shorten(activity) + " (" + std::to_string(stats.frequency) + ")") + "</text></g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_model(const ModelSlice& slice, const ComparisonResult& result, Side side, const Metric& metric) {
  std::string out = "<section class=\"model\" data-side=\"" + std::string(to_string(side)) + "\">\n";
  out += "<h2>" + escape_html(slice.label.empty() ? std::string(side == Side::Left ? "Left" : "Right") : slice.label) +
         "</h2>\n";
  out += "<p class=\"filter\">Filter: " + escape_html(slice.filter.describe()) + "</p>\n";
  if (slice.dfg.empty()) {
    out += "<div class=\"empty-model\">Empty model: no cases matched this filter.</div>\n";
  } else {
    out += render_svg(slice, highlight_classes(result, side), side, metric);
  }
  out += "</section>\n";
  return out;
}

std::string stat_row(std::string_view name, const std::string& left, const std::string& right,
                     const std::string& diff) {
  return "<tr><th scope=\"row\">" + std::string(name) + "</th><td>" + left + "</td><td>" + right + "</td><td>" +
         diff + "</td></tr>\n";
}

std::string render_statistics(const ComparisonResult& result) {
  const auto& l = result.left.statistics;
  const auto& r = result.right.statistics;
  const StatisticsDelta d = statistics_delta(l, r);
  const auto count = [](auto v) { return std::to_string(v); };
  const auto signed_count = [](long long v) { return (v > 0 ? "+" : "") + std::to_string(v); };
  const auto seconds = [](double v) { return num(v) + " s"; };
  std::string out = "<section class=\"stats\">\n<h2>Statistics</h2>\n<table>\n";
  out += "<thead><tr><th></th><th>Left</th><th>Right</th><th>Δ (right − left)</th></tr></thead>\n<tbody>\n";
  out += stat_row("Cases", count(l.case_count), count(r.case_count), signed_count(d.case_count));
  out += stat_row("Variants", count(l.variant_count), count(r.variant_count), signed_count(d.variant_count));
  out += stat_row("Events", count(l.event_count), count(r.event_count), signed_count(d.event_count));
  out += stat_row("Avg. running time", seconds(l.avg_case_duration_s), seconds(r.avg_case_duration_s),
                  (d.avg_case_duration_s > 0 ? "+" : "") + seconds(d.avg_case_duration_s));
  out += stat_row("Activities", count(result.left.dfg.nodes.size()), count(result.right.dfg.nodes.size()),
                  signed_count(static_cast<long long>(result.right.dfg.nodes.size()) -
                               static_cast<long long>(result.left.dfg.nodes.size())));
  out += stat_row("Edges", count(result.left.dfg.edges.size()), count(result.right.dfg.edges.size()),
                  signed_count(static_cast<long long>(result.right.dfg.edges.size()) -
                               static_cast<long long>(result.left.dfg.edges.size())));
  out += "</tbody>\n</table>\n</section>\n";
  return out;
}

std::string unique_list(std::string_view title, Side side, const std::set<std::string>& nodes,
                        const std::set<Edge>& edges) {
  const std::string side_name(to_string(side));
  std::string out = "<div class=\"diff-side\"><h3>" + std::string(title) + "</h3>\n";
  if (nodes.empty() && edges.empty()) return out + "<p>None.</p></div>\n";
  out += "<ul>\n";
  for (const auto& a : nodes)
    out += "<li class=\"unique\" data-side=\"" + side_name + "\" data-kind=\"node\" data-label=\"" + escape_html(a) +
           "\">Activity " + escape_html(a) + "</li>\n";
  for (const auto& e : edges)
    out += "<li class=\"unique\" data-side=\"" + side_name + "\" data-kind=\"edge\" data-label=\"" +
           escape_html(edge_label(e)) + "\">Edge " + escape_html(edge_label(e)) + "</li>\n";
  out += "</ul></div>\n";
  return out;
}

}  // namespace

std::string export_comparison_report(const ComparisonResult& result, const Metric& metric) {
  const std::string red(kUniqueColor);
  std::string out =
      "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n"
      "<title>Process comparison report</title>\n<style>\n"
      "@page { size: A4 landscape; margin: 12mm; }\n"
      "body { font-family: Helvetica, Arial, sans-serif; color: #222; margin: 1.5em; }\n"
      "header h1 { margin: 0 0 .2em; font-size: 1.5em; }\n"
      ".meta { color: #555; margin: 0 0 1em; }\n"
      ".layout { display: grid; grid-template-columns: 1fr minmax(16em, auto) 1fr; gap: 1.2em; align-items: start; }\n"
      ".model h2, .stats h2 { font-size: 1.1em; margin: 0 0 .3em; }\n"
      ".filter { font-size: .85em; color: #555; margin: 0 0 .5em; }\n"
      "svg.dfg { width: 100%; height: auto; border: 1px solid #ddd; background: #fff; }\n"
      ".node rect { fill: #f7f7f7; stroke: #555; stroke-width: 1.2; }\n"
      ".node text, .edge text { font-size: 12px; fill: #222; }\n"
      ".edge path { fill: none; stroke: #777; stroke-width: 1.4; }\n"
      ".arrowhead { fill: #777; }\n"
      ".node.unique rect { stroke: " + red + "; stroke-width: 2.5; fill: #fdecea; }\n"
      ".node.unique text, .edge.unique text { fill: " + red + "; }\n"
      ".edge.unique path { stroke: " + red + "; stroke-dasharray: 6 4; }\n"
      ".arrowhead-unique { fill: " + red + "; }\n"
      "li.unique { color: " + red + "; }\n"
      ".empty-model { border: 2px dashed #bbb; color: #777; padding: 3em 1em; text-align: center; }\n"
      "table { border-collapse: collapse; width: 100%; font-size: .9em; }\n"
      "th, td { border-bottom: 1px solid #e3e3e3; padding: .35em .5em; text-align: right; }\n"
      "th[scope=row] { text-align: left; }\n"
      ".differences { display: grid; grid-template-columns: 1fr 1fr; gap: 1.2em; margin-top: 1.5em; }\n"
      ".differences h3 { font-size: 1em; }\n"
      "footer { margin-top: 2em; font-size: .8em; color: #777; }\n"
      "@media print { body { margin: 0; } .layout { gap: .6em; } }\n"
      "</style>\n</head>\n<body>\n";
  out += "<header>\n<h1>Process comparison report</h1>\n<p class=\"meta\">Created <time datetime=\"" +
         format_iso8601(result.created_at) + "\">" + format_iso8601(result.created_at) +
         "</time> · edge metric: " + std::string(metric.name()) + "</p>\n</header>\n";
  out += "<main class=\"layout\">\n";
  out += render_model(result.left, result, Side::Left, metric);
  out += render_statistics(result);
  out += render_model(result.right, result, Side::Right, metric);
  out += "</main>\n<section class=\"differences\">\n";
  out += unique_list("Only in left model", Side::Left, result.unique_activities_left, result.unique_edges_left);
  out += unique_list("Only in right model", Side::Right, result.unique_activities_right, result.unique_edges_right);
  out += "</section>\n<footer>Elements drawn in red occur in only one of the two models; dashed red edges are "
         "directly-follows relations observed on one side only. Common activities: " +
         std::to_string(result.common_activities.size()) + ", common edges: " +
         std::to_string(result.common_edges.size()) + ".</footer>\n</body>\n</html>\n";
  return out;
}

}  // namespace cpm
