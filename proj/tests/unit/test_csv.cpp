#include "doctest.h"

#include <fstream>
#include <sstream>

#include "cpm/csv.hpp"
#include "cpm/error.hpp"

using namespace cpm;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Timestamp iso(const char* text) { return *parse_iso8601(text); }

}  // namespace

TEST_CASE("three rows, two cases") {
  const EventLog log = parse_csv(
      "case_id,activity,timestamp\n"
      "1,A,2020-01-01T00:00:00Z\n"
      "1,B,2020-01-01T00:10:00Z\n"
      "2,A,2020-01-02T00:00:00Z\n",
      CsvMapping{});
  REQUIRE(log.case_count() == 2);
  CHECK(log.traces()[0].case_id == "1");
  CHECK(log.traces()[0].events.size() == 2);
  CHECK(log.traces()[1].events.size() == 1);
}

TEST_CASE("rows out of order are grouped and sorted") {
  const EventLog log = parse_csv(
      "case_id,activity,timestamp\n"
      "1,C,2020-01-01T02:00:00Z\n"
      "2,X,2020-01-01T00:00:00Z\n"
      "1,A,2020-01-01T00:00:00Z\n"
      "1,B,2020-01-01T01:00:00Z\n",
      CsvMapping{});
  const auto& ev = log.traces()[0].events;
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].activity == "A");
  CHECK(ev[1].activity == "B");
  CHECK(ev[2].activity == "C");
}

TEST_CASE("errors") {
  const std::string header = "case_id,activity,timestamp\n";
  SUBCASE("bad timestamp names the data row") {
    CHECK_THROWS_WITH_AS(parse_csv(header +
                                       "1,A,2020-01-01T00:00:00Z\n1,B,2020-01-01T00:00:00Z\n"
                                       "1,C,2020-01-01T00:00:00Z\n2,A,not-a-date\n",
                                   CsvMapping{}),
                         "row 4: unparseable timestamp 'not-a-date'", IngestionError);
  }
  SUBCASE("unknown column is a configuration error") {
    CsvMapping m;
    m.case_column = "patient";
    CHECK_THROWS_WITH_AS(parse_csv(header + "1,A,2020-01-01T00:00:00Z\n", m),
                         "case column 'patient' not found in CSV header", ConfigurationError);
  }
  SUBCASE("no header") { CHECK_THROWS_AS(parse_csv("", CsvMapping{}), ConfigurationError); }
  SUBCASE("ragged row") {
    CHECK_THROWS_AS(parse_csv(header + "1,A\n", CsvMapping{}), IngestionError);
  }
  SUBCASE("empty activity") {
    CHECK_THROWS_AS(parse_csv(header + "1,,2020-01-01T00:00:00Z\n", CsvMapping{}), IngestionError);
  }
  SUBCASE("unterminated quote") {
    CHECK_THROWS_AS(parse_csv(header + "1,\"A,2020-01-01T00:00:00Z\n", CsvMapping{}), ParseError);
  }
}

TEST_CASE("RFC 4180 records") {
  const auto rows = read_csv_records("a,\"b,c\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",,x\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"a", "b,c", "say \"hi\""});
  CHECK(rows[1] == std::vector<std::string>{"multi\nline", "", "x"});
  CHECK(read_csv_records("").empty());
  CHECK_THROWS_AS(read_csv_records("a\"b\n"), ParseError);
  CHECK_THROWS_AS(read_csv_records("\"a\"b\n"), ParseError);
  try {
    read_csv_records("x\n\"open");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }
}

TEST_CASE("escape round trip") {
  for (const std::string s : {"plain", "a,b", "q\"q", "line\nbreak", ""}) {
    const auto rows = read_csv_records(csv_escape(s) + ",end\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0] == s);
  }
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
}

TEST_CASE("custom mapping and typed extra columns") {
  const std::string dir = CPM_FIXTURE_DIR;
  CsvMapping m;
  m.case_column = "case";
  m.timestamp_column = "time";
  m.timestamp_format = "%d/%m/%Y %H:%M";
  const EventLog log = parse_csv(read_file(dir + "/csv/small_hospital.csv"), m, "hospital");
  REQUIRE(log.case_count() == 2);
  CHECK(log.event_count() == 6);
  const auto& p1 = log.traces()[0];
  CHECK(p1.case_id == "p1");
  CHECK(p1.events[0].timestamp == iso("2020-03-01T08:00:00Z"));
  CHECK(p1.events[2].activity == "Discharge");
  CHECK(p1.events[2].attributes.count("cost") == 0);
  CHECK(p1.events[1].attributes.at("cost") == Scalar{80.0});
  CHECK(log.traces()[1].events[1].activity == "Examination, extended");
  CHECK(log.schema().at({AttributeLevel::Event, "cost"}).type == ScalarType::Float);
  CHECK(log.schema().at({AttributeLevel::Event, "ward"}).type == ScalarType::String);
  CHECK(log.schema().count({AttributeLevel::Case, "ward"}) == 0);
}

TEST_CASE("column type inference") {
  const EventLog log = parse_csv(
      "case_id,activity,timestamp,n,flag,mixed\n"
      "1,A,2020-01-01T00:00:00Z,3,true,1\n"
      "1,B,2020-01-01T00:00:01Z,-4,false,x\n",
      CsvMapping{});
  const auto& s = log.schema();
  CHECK(s.at({AttributeLevel::Event, "n"}).type == ScalarType::Int);
  CHECK(s.at({AttributeLevel::Event, "flag"}).type == ScalarType::Boolean);
  CHECK(s.at({AttributeLevel::Event, "mixed"}).type == ScalarType::String);
  CHECK(log.traces()[0].events[1].attributes.at("n") == Scalar{std::int64_t{-4}});
}

TEST_CASE("stream overload matches text overload") {
  const std::string text = "case_id,activity,timestamp\r\n1,A,2020-01-01T00:00:00Z\r\n";
  std::istringstream in(text);
  CHECK(parse_csv(in, CsvMapping{}, "x") == parse_csv(text, CsvMapping{}, "x"));
}
