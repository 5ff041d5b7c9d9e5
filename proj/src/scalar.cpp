#include "cpm/scalar.hpp"

#include <charconv>
#include <system_error>

namespace cpm {

ScalarType type_of(const Scalar& value) {
  switch (value.index()) {
    case 0: return ScalarType::String;
    case 1: return ScalarType::Int;
    case 2: return ScalarType::Float;
    case 3: return ScalarType::Boolean;
    default: return ScalarType::Date;
  }
}

std::string_view to_string(ScalarType type) {
  switch (type) {
    case ScalarType::String: return "string";
    case ScalarType::Int: return "int";
    case ScalarType::Float: return "float";
    case ScalarType::Boolean: return "boolean";
    case ScalarType::Date: return "date";
    case ScalarType::Mixed: return "mixed";
  }
  return "mixed";
}

std::optional<ScalarType> scalar_type_from_string(std::string_view name) {
  if (name == "string") return ScalarType::String;
  if (name == "int") return ScalarType::Int;
  if (name == "float") return ScalarType::Float;
  if (name == "boolean") return ScalarType::Boolean;
  if (name == "date") return ScalarType::Date;
  if (name == "mixed") return ScalarType::Mixed;
  return std::nullopt;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

std::string to_display_string(const Scalar& value) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(Timestamp t) const { return format_iso8601(t); }
  };
  return std::visit(Visitor{}, value);
}

bool scalar_equivalent(const Scalar& a, const Scalar& b) {
  if (a.index() == b.index()) return a == b;
  const auto as_double = [](const Scalar& s) -> std::optional<double> {
    if (const auto* i = std::get_if<std::int64_t>(&s)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&s)) return *d;
    return std::nullopt;
  };
  const auto da = as_double(a);
  const auto db = as_double(b);
  return da && db && *da == *db;
}

}  // namespace cpm
