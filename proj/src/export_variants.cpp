#include <algorithm>
#include <vector>

#include "cpm/csv.hpp"
#include "cpm/export.hpp"

namespace cpm {

std::string edge_label(const Edge& edge) { return edge.first + "→" + edge.second; }

std::string export_variants_csv(const EventLog& log) {
  std::vector<std::pair<std::string, std::size_t>> rows;
  for (const auto& [variant, count] : variants(log)) {
    std::string text;
    for (std::size_t i = 0; i < variant.size(); ++i) {
      if (i > 0) text += "→";
      text += variant[i];
    }
    rows.emplace_back(std::move(text), count);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::string out = "variant,case_count\r\n";
  for (const auto& [text, count] : rows) out += csv_escape(text) + "," + std::to_string(count) + "\r\n";
  return out;
}

}  // namespace cpm
