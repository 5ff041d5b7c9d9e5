#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cpm::detail {

struct XmlToken {
  enum class Kind { StartElement, EndElement, Text, EndOfDocument };

  Kind kind = Kind::EndOfDocument;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
      if (k == key) return &v;
    return nullptr;
  }
};

/// Minimal non-validating pull parser. Checks well-formedness (tag
/// nesting, quoting, entity references, single root) and reports errors
/// as ParseError with line/column. Comments, processing instructions and
/// the DOCTYPE are skipped; CDATA is returned as text. Self-closing tags
/// produce a StartElement immediately followed by an EndElement.
class XmlReader {
public:
  explicit XmlReader(std::string_view document);

  XmlToken next();

private:
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const std::string& message, std::size_t line, std::size_t column) const;

  bool at_end() const { return pos_ >= doc_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < doc_.size() ? doc_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const { return doc_.substr(pos_, s.size()) == s; }
  void advance(std::size_t n = 1);
  void skip_whitespace();
  void skip_past(std::string_view terminator, std::string_view what);
  void skip_doctype();
  std::string read_name();
  std::string read_attribute_value();
  void append_reference(std::string& out);

  XmlToken read_start_tag();
  XmlToken read_end_tag();

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::vector<std::string> open_;
  bool root_seen_ = false;
  bool pending_end_ = false;
  std::string pending_name_;
};

}  // namespace cpm::detail
