#pragma once

#include "json.hpp"

#include "cpm/comparison.hpp"
#include "cpm/csv.hpp"
#include "cpm/discovery.hpp"
#include "cpm/event_log.hpp"
#include "cpm/filtering.hpp"

// Canonical JSON forms shared by the HTTP API, session persistence and the
// command-line tool. Parsing functions throw ValidationError on malformed
// input.
namespace cpm {

using Json = nlohmann::json;

Json scalar_to_json(const Scalar& value);
/// Strings, integers, floats and booleans; anything else is rejected.
Scalar scalar_from_json(const Json& value);

Json filter_to_json(const FilterSpec& spec);
FilterSpec filter_from_json(const Json& json);

Json dfg_to_json(const Dfg& dfg);
Json statistics_to_json(const LogStatistics& stats);
Json slice_to_json(const ModelSlice& slice);

Json filter_options_to_json(const FilterOptions& options);

/// The comparison with per-side highlight classes and the chosen metric
/// projected onto every edge.
Json comparison_to_json(const ComparisonResult& result, const Metric& metric);

CsvMapping csv_mapping_from_json(const Json& json);
Json csv_mapping_to_json(const CsvMapping& mapping);

}  // namespace cpm
