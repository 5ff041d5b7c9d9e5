#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cpm {

/// Base of every error raised by the library. `code()` is the
/// machine-readable tag the HTTP layer forwards to clients.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
  virtual const char* code() const noexcept = 0;
};

/// Malformed input document (bad XML, broken CSV quoting).
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  const char* code() const noexcept override { return "parse_error"; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input whose content violates the event-log model.
class IngestionError : public Error {
public:
  using Error::Error;
  const char* code() const noexcept override { return "ingestion_error"; }
};

/// Caller-supplied settings that cannot be honored (e.g. a CSV mapping
/// naming a column that does not exist).
class ConfigurationError : public Error {
public:
  using Error::Error;
  const char* code() const noexcept override { return "configuration_error"; }
};

class ValidationError : public Error {
public:
  using Error::Error;
  const char* code() const noexcept override { return "validation_error"; }
};

}  // namespace cpm
