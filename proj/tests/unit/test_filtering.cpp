#include "doctest.h"

#include <random>

#include "cpm/demo_log.hpp"
#include "cpm/error.hpp"
#include "cpm/filtering.hpp"
#include "oracles.hpp"
#include "random_log.hpp"

using namespace cpm;
using namespace cpm::testing;

namespace {

Timestamp iso(const char* text) { return *parse_iso8601(text); }

std::set<std::string> case_ids(const EventLog& log) {
  std::set<std::string> out;
  for (const auto& t : log.traces()) out.insert(t.case_id);
  return out;
}

EventLog ward_log() {
  const auto trace = [](std::string id, std::string ward) {
    return Trace{std::move(id), {{"ward", std::move(ward)}}, {Event{"A", Timestamp{Millis{0}}, {}}}};
  };
  return EventLog("w", {trace("1", "ICU"), trace("2", "WARD"), trace("3", "ICU")});
}

AttributeClause clause(std::string key, std::set<Scalar> values, AttributeLevel level = AttributeLevel::Case) {
  return AttributeClause{std::move(key), level, std::move(values)};
}

std::string validation_message(const EventLog& log, const FilterSpec& spec) {
  try {
    apply_filter(log, spec);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("case attribute clause keeps matching traces unchanged") {
  const EventLog log = ward_log();
  const EventLog out = apply_filter(log, FilterSpec{{clause("ward", {std::string("ICU")})}, {}});
  REQUIRE(out.case_count() == 2);
  CHECK(out.traces()[0] == log.traces()[0]);
  CHECK(out.traces()[1] == log.traces()[2]);
}

TEST_CASE("empty spec is the identity") {
  const EventLog log = generate_demo_log(7, 200);
  const FilterSpec spec;
  CHECK(spec.empty());
  CHECK(apply_filter(log, spec) == log);
  CHECK(spec.describe() == "all cases");
}

TEST_CASE("validation errors") {
  const EventLog log = ward_log();
  CHECK(validation_message(log, FilterSpec{{clause("floor", {std::string("1")})}, {}}) ==
        "attribute_clauses[0] (floor): unknown attribute key");
  CHECK(validation_message(log, FilterSpec{{clause("ward", {std::string("ICU")}, AttributeLevel::Event)}, {}}) ==
        "attribute_clauses[0] (ward): attribute exists only at case level, not event");
  CHECK(validation_message(log, FilterSpec{{clause("ward", {})}, {}}) ==
        "attribute_clauses[0] (ward): allowed_values must not be empty");
  CHECK(validation_message(log, FilterSpec{{}, TimeWindow{iso("2020-02-01T00:00:00Z"), iso("2020-01-01T00:00:00Z")}}) ==
        "time_window: start must be before end");
  CHECK(validation_message(log, FilterSpec{{}, TimeWindow{iso("2020-01-01T00:00:00Z"), iso("2020-01-01T00:00:00Z")}}) ==
        "time_window: start must be before end");
}

TEST_CASE("numeric values match across int and float") {
  Trace t{"1", {{"bmi", 25.0}, {"age", std::int64_t{40}}}, {Event{"A", Timestamp{Millis{0}}, {}}}};
  const EventLog log("n", {t});
  CHECK(apply_filter(log, FilterSpec{{clause("bmi", {std::int64_t{25}})}, {}}).case_count() == 1);
  CHECK(apply_filter(log, FilterSpec{{clause("age", {40.0})}, {}}).case_count() == 1);
  CHECK(apply_filter(log, FilterSpec{{clause("age", {41.0})}, {}}).case_count() == 0);
}

TEST_CASE("date attribute accepts ISO strings") {
  Trace t{"1", {{"admitted", iso("2020-05-05T10:00:00Z")}}, {Event{"A", Timestamp{Millis{0}}, {}}}};
  const EventLog log("d", {t});
  CHECK(apply_filter(log, FilterSpec{{clause("admitted", {std::string("2020-05-05T12:00:00+02:00")})}, {}})
            .case_count() == 1);
  CHECK_THROWS_AS(apply_filter(log, FilterSpec{{clause("admitted", {std::string("soon")})}, {}}), ValidationError);
}

TEST_CASE("time windows are half-open") {
  Trace t{"1", {}, {Event{"A", iso("2020-03-01T00:00:00Z"), {}}, Event{"B", iso("2020-06-01T00:00:00Z"), {}}}};
  const EventLog log("t", {t});
  const TimeWindow w{iso("2020-03-01T00:00:00Z"), iso("2020-06-01T00:00:00Z"), WindowMode::Contained};
  CHECK(apply_filter(log, FilterSpec{{}, w}).empty());
  TimeWindow wi = w;
  wi.mode = WindowMode::Intersecting;
  CHECK(apply_filter(log, FilterSpec{{}, wi}).case_count() == 1);
  wi.start = iso("2020-03-01T00:00:00.001Z");
  CHECK(apply_filter(log, FilterSpec{{}, wi}).empty());
}

TEST_CASE("seed-7 demo log: window and attribute filters against brute force") {
  const EventLog log = generate_demo_log(7, 500);
  const RawLog raw = to_raw(log);
  const auto start = iso("2020-03-01T00:00:00Z");
  const auto end = iso("2020-06-01T00:00:00Z");
  const OracleWindow ow{start.time_since_epoch().count(), end.time_since_epoch().count(), false};

  const EventLog windowed = apply_filter(log, FilterSpec{{}, TimeWindow{start, end, WindowMode::Intersecting}});
  CHECK(case_ids(windowed) == oracle_filter(raw, {}, ow));
  CHECK(windowed.case_count() > 0);

  OracleWindow oc = ow;
  oc.contained = true;
  CHECK(case_ids(apply_filter(log, FilterSpec{{}, TimeWindow{start, end, WindowMode::Contained}})) ==
        oracle_filter(raw, {}, oc));

  const FilterSpec icu{{clause("ward", {std::string("ICU")})}, TimeWindow{start, end, WindowMode::Intersecting}};
  CHECK(case_ids(apply_filter(log, icu)) == oracle_filter(raw, {OracleClause{"ward", true, {std::string("ICU")}}}, ow));
}

TEST_CASE("filter options") {
  SUBCASE("value menu is truncated at 200 for 10000 distinct values") {
    std::vector<Trace> traces;
    for (int i = 0; i < 10000; ++i)
      traces.push_back(Trace{"c" + std::to_string(i), {{"tag", "t" + std::to_string(i)}},
                             {Event{"A", Timestamp{Millis{i}}, {}}}});
    const FilterOptions opts = describe_filter_options(EventLog("many", traces));
    REQUIRE(opts.attributes.size() == 1);
    const auto& a = opts.attributes[0];
    CHECK(a.values.size() == AttributeOptions::kMaxValues);
    CHECK(a.distinct_count == 10000);
    CHECK(a.truncated);
  }
  SUBCASE("counts, order and ranges match brute force") {
    std::mt19937_64 rng(404);
    for (int i = 0; i < 30; ++i) {
      const RawLog raw = random_raw_log(rng);
      const FilterOptions opts = describe_filter_options(to_event_log(raw));
      if (raw.empty()) {
        CHECK(!opts.time_range);
        CHECK(opts.attributes.empty());
        continue;
      }
      std::int64_t lo = raw[0].events[0].ts_ms;
      std::int64_t hi = lo;
      std::map<Scalar, std::size_t> ward, resource;
      std::map<Scalar, std::size_t> priority;
      for (const auto& rc : raw) {
        if (auto it = rc.attributes.find("ward"); it != rc.attributes.end()) ward[it->second]++;
        priority[rc.attributes.at("priority")]++;
        for (const auto& e : rc.events) {
          lo = std::min(lo, e.ts_ms);
          hi = std::max(hi, e.ts_ms);
          if (auto it = e.attributes.find("resource"); it != e.attributes.end()) resource[it->second]++;
        }
      }
      REQUIRE(opts.time_range);
      CHECK(opts.time_range->first == to_timestamp(lo));
      CHECK(opts.time_range->second == to_timestamp(hi));
      for (const auto& a : opts.attributes) {
        std::map<Scalar, std::size_t> got;
        for (std::size_t k = 0; k < a.values.size(); ++k) {
          got[a.values[k].value] = a.values[k].count;
          if (k > 0) CHECK(a.values[k - 1].count >= a.values[k].count);
        }
        CHECK(!a.truncated);
        CHECK(a.distinct_count == got.size());
        if (a.key == AttributeKey{AttributeLevel::Case, "ward"}) CHECK(got == ward);
        if (a.key == AttributeKey{AttributeLevel::Case, "priority"}) {
          CHECK(got == priority);
          REQUIRE(a.min);
          CHECK(*a.min == priority.begin()->first);
          CHECK(*a.max == priority.rbegin()->first);
        }
        if (a.key == AttributeKey{AttributeLevel::Event, "resource"}) {
          CHECK(got == resource);
          CHECK(!a.min);
        }
      }
    }
  }
}

TEST_CASE("property: filter semantics on random logs") {
  std::mt19937_64 rng(505);
  for (int i = 0; i < 80; ++i) {
    const RawLog raw = random_raw_log(rng);
    const EventLog log = to_event_log(raw);
    const std::int64_t a = kRandomEpochMs + static_cast<std::int64_t>(rng() % 300) * 24 * 3600 * 1000;
    const std::int64_t b = a + 1 + static_cast<std::int64_t>(rng() % (60ULL * 24 * 3600 * 1000));
    const TimeWindow win{to_timestamp(a), to_timestamp(b), WindowMode::Intersecting};
    const TimeWindow con{to_timestamp(a), to_timestamp(b), WindowMode::Contained};
    const std::string w = ward_values()[rng() % 3];
    const std::string r = resource_values()[rng() % 4];

    const bool has_ward = log.schema().count({AttributeLevel::Case, "ward"}) > 0;
    const bool has_resource = log.schema().count({AttributeLevel::Event, "resource"}) > 0;

    FilterSpec spec;
    std::vector<OracleClause> oracle;
    if (has_ward) {
      spec.attribute_clauses.push_back(clause("ward", {w}));
      oracle.push_back({"ward", true, {w}});
    }
    spec.time_window = win;
    const EventLog filtered = apply_filter(log, spec);
    CHECK(case_ids(filtered) == oracle_filter(raw, oracle, OracleWindow{a, b, false}));

    // Idempotence.
    CHECK(apply_filter(filtered, spec) == filtered);

    // Retained traces are identical to their originals.
    for (const auto& t : filtered.traces()) {
      const auto it = std::find_if(log.traces().begin(), log.traces().end(),
                                   [&](const Trace& o) { return o.case_id == t.case_id; });
      REQUIRE(it != log.traces().end());
      CHECK(*it == t);
    }

    // Adding a clause never adds cases.
    if (has_resource) {
      FilterSpec narrower = spec;
      narrower.attribute_clauses.push_back(clause("resource", {r}, AttributeLevel::Event));
      const auto narrow_ids = case_ids(apply_filter(log, narrower));
      const auto wide_ids = case_ids(filtered);
      CHECK(std::includes(wide_ids.begin(), wide_ids.end(), narrow_ids.begin(), narrow_ids.end()));
      oracle.push_back({"resource", false, {r}});
      CHECK(narrow_ids == oracle_filter(raw, oracle, OracleWindow{a, b, false}));
    }

    // Contained never keeps more than intersecting.
    const auto c_ids = case_ids(apply_filter(log, FilterSpec{{}, con}));
    const auto i_ids = case_ids(apply_filter(log, FilterSpec{{}, win}));
    CHECK(std::includes(i_ids.begin(), i_ids.end(), c_ids.begin(), c_ids.end()));
    CHECK(c_ids == oracle_filter(raw, {}, OracleWindow{a, b, true}));
  }
}

TEST_CASE("describe") {
  FilterSpec spec{{clause("ward", {std::string("ICU"), std::string("WARD")})},
                  TimeWindow{iso("2020-03-01T00:00:00Z"), iso("2020-06-01T00:00:00Z"), WindowMode::Contained}};
  CHECK(spec.describe() ==
        "ward ∈ {ICU, WARD} ∧ time ⊆ [2020-03-01T00:00:00.000Z, 2020-06-01T00:00:00.000Z)");
}

TEST_CASE("an empty log accepts any structurally valid spec") {
  const FilterSpec spec{{clause("ward", {std::string("ICU")})}, {}};
  CHECK(apply_filter(EventLog(), spec).empty());
  CHECK_THROWS_AS(apply_filter(EventLog(), FilterSpec{{clause("ward", {})}, {}}), ValidationError);
}
