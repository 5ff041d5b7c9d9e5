// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cpm/comparison.hpp"
#include "cpm/csv.hpp"
#include "cpm/demo_log.hpp"
#include "cpm/discovery.hpp"
#include "cpm/export.hpp"
#include "cpm/filtering.hpp"
#include "cpm/json_forms.hpp"
#include "cpm/xes.hpp"
#include "dot_checker.hpp"
#include "html_probe.hpp"
#include "http_helpers.hpp"
#include "oracles.hpp"
#include "random_log.hpp"
#include "server_fixture.hpp"

using namespace cpm;
using namespace cpm::testing;

namespace {

constexpr double kDurationToleranceS = 0.001;
constexpr int kRandomCases = 100;

// Failure collector for one criterion; keeps the first few messages.
class Checker {
public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (messages_.size() < 8) messages_.push_back(what);
  }
  bool ok() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }
  std::size_t failures() const { return failures_; }
  const std::vector<std::string>& messages() const { return messages_; }

private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> messages_;
};

struct VariantsSample {
  std::string csv;
  std::size_t variant_count;
  std::string origin;
};

struct ReportSample {
  std::string html;
  std::set<ElementRef> expected_red;
  std::string origin;
};

// Artefacts produced by criteria 1-5 and validated by criterion 6.
struct Exports {
  std::vector<std::pair<std::string, std::string>> dot;  // (origin, text)
  std::vector<VariantsSample> variants;
  std::vector<ReportSample> reports;
} g_exports;

std::set<ElementRef> expected_red(const ComparisonResult& r) {
  std::set<ElementRef> out;
  for (const auto& a : r.unique_activities_left) out.insert({"left", "node", a});
  for (const auto& a : r.unique_activities_right) out.insert({"right", "node", a});
  for (const auto& e : r.unique_edges_left) out.insert({"left", "edge", edge_label(e)});
  for (const auto& e : r.unique_edges_right) out.insert({"right", "edge", edge_label(e)});
  return out;
}

template <class T>
std::set<T> intersect(const std::set<T>& a, const std::set<T>& b) {
  std::set<T> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

template <class T>
std::set<T> minus(const std::set<T>& a, const std::set<T>& b) {
  std::set<T> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

std::set<std::string> case_ids(const EventLog& log) {
  std::set<std::string> out;
  for (const auto& t : log.traces()) out.insert(t.case_id);
  return out;
}

std::set<std::string> node_set(const Dfg& d) {
  std::set<std::string> out;
  for (const auto& [n, s] : d.nodes) out.insert(n);
  return out;
}

std::set<Edge> edge_set(const Dfg& d) {
  std::set<Edge> out;
  for (const auto& [e, s] : d.edges) out.insert(e);
  return out;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------

void dfg_oracle(Checker& c) {
  std::mt19937_64 rng(1001);
  for (int i = 0; i < kRandomCases; ++i) {
    const RawLog raw = random_raw_log(rng);
    const EventLog log = to_event_log(raw);
    const Dfg dfg = discover_dfg(log);
    const OracleDfg o = oracle_dfg(raw);
    const std::string tag = "log " + std::to_string(i) + ": ";

    c.expect(dfg.nodes.size() == o.node_frequency.size(), tag + "node set size");
    for (const auto& [a, n] : dfg.nodes) {
      const auto it = o.node_frequency.find(a);
      c.expect(it != o.node_frequency.end() && it->second == n.frequency, tag + "node frequency " + a);
    }
    c.expect(dfg.edges.size() == o.edge_frequency.size(), tag + "edge set size");
    for (const auto& [e, s] : dfg.edges) {
      const auto it = o.edge_frequency.find(e);
      if (it == o.edge_frequency.end()) {
        c.expect(false, tag + "spurious edge " + edge_label(e));
        continue;
      }
      c.expect(it->second == s.frequency, tag + "edge frequency " + edge_label(e));
      c.expect(std::abs(s.mean_s - o.edge_mean_s(e)) <= kDurationToleranceS, tag + "edge mean " + edge_label(e));
    }
    c.expect(dfg.start_activities == o.starts, tag + "start activities");
    c.expect(dfg.end_activities == o.ends, tag + "end activities");

    g_exports.dot.emplace_back("AC1 " + tag + "frequency", export_dot(dfg, Metric::frequency()));
    g_exports.dot.emplace_back("AC1 " + tag + "mean", export_dot(dfg, Metric::duration(DurationStatistic::Mean)));
    g_exports.variants.push_back({export_variants_csv(log), log_statistics(log).variant_count, "AC1 " + tag});
  }
}

FilterSpec random_spec(std::mt19937_64& rng, const EventLog& log, std::vector<OracleClause>& oracle,
                       std::optional<OracleWindow>& window) {
  FilterSpec spec;
  const auto coin = [&] { return (rng() & 1) == 1; };
  if (log.schema().count({AttributeLevel::Case, "ward"}) && coin()) {
    std::set<Scalar> allowed;
    for (const auto& w : ward_values())
      if (coin()) allowed.insert(w);
    if (allowed.empty()) allowed.insert(ward_values()[rng() % 3]);
    spec.attribute_clauses.push_back({"ward", AttributeLevel::Case, allowed});
    oracle.push_back({"ward", true, {allowed.begin(), allowed.end()}});
  }
  if (log.schema().count({AttributeLevel::Case, "priority"}) && coin()) {
    const Scalar p = std::int64_t(1 + rng() % 3);
    spec.attribute_clauses.push_back({"priority", AttributeLevel::Case, {p}});
    oracle.push_back({"priority", true, {p}});
  }
  if (log.schema().count({AttributeLevel::Event, "resource"}) && coin()) {
    const Scalar r = resource_values()[rng() % 4];
    spec.attribute_clauses.push_back({"resource", AttributeLevel::Event, {r}});
    oracle.push_back({"resource", false, {r}});
  }
  if (coin()) {
    const std::int64_t a = kRandomEpochMs + static_cast<std::int64_t>(rng() % 330) * 24 * 3600 * 1000;
    const std::int64_t b = a + 1 + static_cast<std::int64_t>(rng() % (90ULL * 24 * 3600 * 1000));
    const bool contained = coin();
    spec.time_window = TimeWindow{to_timestamp(a), to_timestamp(b),
                                  contained ? WindowMode::Contained : WindowMode::Intersecting};
    window = OracleWindow{a, b, contained};
  }
  return spec;
}

void filter_oracle(Checker& c) {
  std::mt19937_64 rng(2002);
  for (int i = 0; i < kRandomCases; ++i) {
    const RawLog raw = random_raw_log(rng);
    const EventLog log = to_event_log(raw);
    std::vector<OracleClause> oracle;
    std::optional<OracleWindow> window;
    const FilterSpec spec = random_spec(rng, log, oracle, window);
    const std::string tag = "pair " + std::to_string(i) + ": ";

    const auto kept = case_ids(apply_filter(log, spec));
    c.expect(kept == oracle_filter(raw, oracle, window), tag + "kept case ids differ from brute force");

    // Monotonicity: one more clause never adds cases.
    if (log.schema().count({AttributeLevel::Event, "resource"})) {
      FilterSpec narrower = spec;
      narrower.attribute_clauses.push_back(
          {"resource", AttributeLevel::Event, {Scalar{resource_values()[rng() % 4]}}});
      const auto narrow = case_ids(apply_filter(log, narrower));
      c.expect(std::includes(kept.begin(), kept.end(), narrow.begin(), narrow.end()), tag + "monotonicity");
    }

    // Contained is never looser than intersecting over the same window.
    FilterSpec contained = spec;
    FilterSpec intersecting = spec;
    if (!spec.time_window) {
      const TimeWindow w{to_timestamp(kRandomEpochMs), to_timestamp(kRandomEpochMs + kYearMs / 2)};
      contained.time_window = intersecting.time_window = w;
    }
    contained.time_window->mode = WindowMode::Contained;
    intersecting.time_window->mode = WindowMode::Intersecting;
    const auto ci = case_ids(apply_filter(log, contained));
    const auto ii = case_ids(apply_filter(log, intersecting));
    c.expect(std::includes(ii.begin(), ii.end(), ci.begin(), ci.end()), tag + "contained subset of intersecting");
  }
}

void comparison_soundness(Checker& c) {
  std::mt19937_64 rng(3003);
  for (int i = 0; i < kRandomCases; ++i) {
    const EventLog a = to_event_log(random_raw_log(rng));
    const EventLog b = to_event_log(random_raw_log(rng));
    const std::string tag = "pair " + std::to_string(i) + ": ";
    const auto ab = compare(make_slice(a, "A", {}), make_slice(b, "B", {}));
    const auto ba = compare(make_slice(b, "B", {}), make_slice(a, "A", {}));

    const auto na = node_set(ab.left.dfg), nb = node_set(ab.right.dfg);
    const auto ea = edge_set(ab.left.dfg), eb = edge_set(ab.right.dfg);
    c.expect(ab.common_activities == intersect(na, nb), tag + "common activities");
    c.expect(ab.unique_activities_left == minus(na, nb), tag + "unique left activities");
    c.expect(ab.unique_activities_right == minus(nb, na), tag + "unique right activities");
    c.expect(ab.common_edges == intersect(ea, eb), tag + "common edges");
    c.expect(ab.unique_edges_left == minus(ea, eb), tag + "unique left edges");
    c.expect(ab.unique_edges_right == minus(eb, ea), tag + "unique right edges");
    c.expect(intersect(ab.common_activities, ab.unique_activities_left).empty(), tag + "disjoint left classes");

    c.expect(ab.unique_activities_left == ba.unique_activities_right &&
                 ab.unique_activities_right == ba.unique_activities_left &&
                 ab.unique_edges_left == ba.unique_edges_right && ab.unique_edges_right == ba.unique_edges_left &&
                 ab.common_activities == ba.common_activities && ab.common_edges == ba.common_edges,
             tag + "swap symmetry");

    const auto self = compare(make_slice(a, "A", {}), make_slice(a, "A'", {}));
    c.expect(self.unique_activities_left.empty() && self.unique_activities_right.empty() &&
                 self.unique_edges_left.empty() && self.unique_edges_right.empty(),
             tag + "self comparison has no unique element");

    const auto hl = highlight_classes(ab, Side::Left);
    const auto hr = highlight_classes(ab, Side::Right);
    g_exports.dot.emplace_back("AC3 " + tag + "left", export_dot(ab.left.dfg, Metric::frequency(), hl));
    g_exports.dot.emplace_back("AC3 " + tag + "right",
                               export_dot(ab.right.dfg, Metric::duration(DurationStatistic::Median), hr));
    if (i % 10 == 0) {
      g_exports.reports.push_back({export_comparison_report(ab, Metric::frequency()), expected_red(ab), "AC3 " + tag});
      g_exports.reports.push_back({export_comparison_report(self, Metric::frequency()), {}, "AC3 self " + tag});
    }
  }
}

void round_trip(Checker& c) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(std::filesystem::path(CPM_FIXTURE_DIR) / "xes"))
    if (e.path().extension() == ".xes") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  c.expect(files.size() == 20, "expected 20 fixture files, found " + std::to_string(files.size()));
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    try {
      const EventLog log = parse_xes(read_file(f));
      const std::string once = write_xes(log);
      const EventLog back = parse_xes(once);
      c.expect(back == log, name + ": parse(write(log)) != log");
      c.expect(write_xes(back) == once, name + ": second write differs");
      g_exports.dot.emplace_back("AC4 " + name, export_dot(discover_dfg(log), Metric::frequency()));
      g_exports.variants.push_back({export_variants_csv(log), log_statistics(log).variant_count, "AC4 " + name});
    } catch (const std::exception& e) {
      c.expect(false, name + ": " + e.what());
    }
  }
}

void end_to_end(Checker& c) {
  ServerFixture server;
  auto http = server.client();
  const EventLog demo = generate_demo_log(7, 500);

  const auto up = upload(http, "demo-seed7.xes", write_xes(demo));
  c.expect(up.status == 201, "upload status " + std::to_string(up.status));
  if (up.status != 201) return;
  const std::string log_id = up.body["log_id"];
  const auto session = post_json(http, "/api/sessions", {{"log_id", log_id}});
  c.expect(session.status == 201, "create session");
  if (session.status != 201) return;
  const std::string base = "/api/sessions/" + session.body["session_id"].get<std::string>();

  const Json h1 = {{"attribute_clauses", Json::array()},
                   {"time_window", {{"start", "2020-01-01T00:00:00Z"}, {"end", "2020-07-01T00:00:00Z"}}}};
  const Json h2 = {{"attribute_clauses", Json::array()},
                   {"time_window", {{"start", "2020-07-01T00:00:00Z"}, {"end", "2021-01-01T00:00:00Z"}}}};
  c.expect(post_json(http, base + "/slices", {{"label", "H1 2020"}, {"filter", h1}}).status == 201, "add slice H1");
  c.expect(post_json(http, base + "/slices", {{"label", "H2 2020"}, {"filter", h2}}).status == 201, "add slice H2");
  c.expect(put_json(http, base + "/active_pair", {{"left_index", 0}, {"right_index", 1}}).status == 200,
           "activate pair");

  const auto cmp = get(http, base + "/comparison");
  c.expect(cmp.status == 200, "comparison status");
  if (cmp.status != 200) return;
  c.expect(!cmp.body["unique_activities_left"].empty(), "no unique activity on the left");
  c.expect(!cmp.body["unique_activities_right"].empty(), "no unique activity on the right");

  const Timestamp created = *parse_iso8601(cmp.body["created_at"].get<std::string>());
  const auto offline = compare(make_slice(demo, "H1 2020", filter_from_json(h1)),
                               make_slice(demo, "H2 2020", filter_from_json(h2)), created);
  Json expected = comparison_to_json(offline, Metric::frequency());
  Json got = cmp.body;
  got.erase("session_id");
  got.erase("active_pair");
  c.expect(got == expected, "comparison JSON differs from offline recomputation");

  for (const char* kind : {"dot_left", "dot_right"}) {
    const auto r = get(http, base + "/export?kind=" + kind);
    c.expect(r.status == 200, std::string(kind) + " status");
    g_exports.dot.emplace_back(std::string("AC5 ") + kind, r.raw);
  }
  for (const char* kind : {"variants_left", "variants_right"}) {
    const auto r = get(http, base + "/export?kind=" + kind);
    c.expect(r.status == 200, std::string(kind) + " status");
    const bool left = std::string(kind) == "variants_left";
    g_exports.variants.push_back(
        {r.raw, (left ? offline.left : offline.right).statistics.variant_count, std::string("AC5 ") + kind});
  }
  const auto report = get(http, base + "/export?kind=report");
  c.expect(report.status == 200, "report status");
  g_exports.reports.push_back({report.raw, expected_red(offline), "AC5 report"});
}

void export_validity(Checker& c) {
  for (const auto& [origin, text] : g_exports.dot) {
    const DotGraph g = check_dot(text);
    c.expect(g.ok && g.directed, origin + ": invalid DOT (" + g.error + ")");
  }
  for (const auto& v : g_exports.variants) {
    try {
      const auto rows = read_csv_records(v.csv);
      c.expect(!rows.empty() && rows[0] == std::vector<std::string>{"variant", "case_count"}, v.origin + ": header");
      c.expect(rows.size() - 1 == v.variant_count, v.origin + ": row count " + std::to_string(rows.size() - 1) +
                                                       " != variant_count " + std::to_string(v.variant_count));
    } catch (const std::exception& e) {
      c.expect(false, v.origin + ": " + e.what());
    }
  }
  for (const auto& r : g_exports.reports) {
    const auto probe = probe_report(r.html);
    c.expect(probe.red == r.expected_red, r.origin + ": red element set differs from unique sets");
  }
  c.expect(!g_exports.dot.empty() && !g_exports.variants.empty() && !g_exports.reports.empty(),
           "no exports were collected");
}

void statistics(Checker& c) {
  const EventLog log = generate_demo_log(7, 500);
  const auto s = log_statistics(log);
  const auto o = oracle_statistics(to_raw(log));
  c.expect(s.case_count == o.cases, "case_count");
  c.expect(s.variant_count == o.variants, "variant_count");
  c.expect(s.event_count == o.events, "event_count");
  c.expect(std::abs(s.avg_case_duration_s - o.avg_duration_s) <= kDurationToleranceS, "avg_case_duration");
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<void(Checker&)> run;
  double budget_s;  // 0 = no runtime bound
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"AC1", "DFG equals brute-force pair counting on 100 random logs", dfg_oracle, 10.0},
      {"AC2", "filter keeps exactly the brute-force case set on 100 random specs", filter_oracle, 10.0},
      {"AC3", "comparison set identities, swap symmetry and empty self-diff on 100 pairs", comparison_soundness, 0},
      {"AC4", "XES round trip is a fixed point on the 20-file corpus", round_trip, 0},
      {"AC5", "HTTP end-to-end half-year comparison on the seed-7 demo log", end_to_end, 5.0},
      {"AC6", "DOT, variants CSV and HTML report exports are valid", export_validity, 0},
      {"AC7", "seed-7 demo log statistics equal brute force", statistics, 0},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    Checker checker;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(checker);
    } catch (const std::exception& e) {
      checker.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget_s > 0)
      checker.expect(elapsed < cr.budget_s, "runtime " + std::to_string(elapsed) + " s exceeds budget");
    std::printf("[%s] %s %s (%zu checks, %.2f s%s)\n", checker.ok() ? "PASS" : "FAIL", cr.id, cr.title,
                checker.checks(), elapsed,
                cr.budget_s > 0 ? (", budget " + std::to_string(static_cast<int>(cr.budget_s)) + " s").c_str() : "");
    for (const auto& m : checker.messages()) std::printf("    %s\n", m.c_str());
    if (!checker.ok()) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
