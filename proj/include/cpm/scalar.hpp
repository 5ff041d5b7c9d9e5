#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "cpm/time.hpp"

namespace cpm {

/// Attribute value carried by traces and events.
using Scalar = std::variant<std::string, std::int64_t, double, bool, Timestamp>;

enum class ScalarType { String, Int, Float, Boolean, Date, Mixed };

using AttributeMap = std::map<std::string, Scalar>;

ScalarType type_of(const Scalar& value);
std::string_view to_string(ScalarType type);
std::optional<ScalarType> scalar_type_from_string(std::string_view name);

/// Human-readable rendering: dates as ISO-8601, floats in shortest
/// round-trip form, booleans as true/false.
std::string to_display_string(const Scalar& value);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Equality that treats numerically equal int/float values as equal.
bool scalar_equivalent(const Scalar& a, const Scalar& b);

}  // namespace cpm
