#include "xml_reader.hpp"

#include <cctype>
#include <cstdint>

#include "cpm/error.hpp"

namespace cpm::detail {
namespace {

bool is_name_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == ':' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
  return is_name_start(c) || std::isdigit(c) || c == '-' || c == '.';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

XmlReader::XmlReader(std::string_view document) : doc_(document) {
  if (doc_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
}

void XmlReader::fail(const std::string& message) const { fail_at(message, line_, column_); }

void XmlReader::fail_at(const std::string& message, std::size_t line, std::size_t column) const {
  throw ParseError(message, line, column);
}

void XmlReader::advance(std::size_t n) {
  for (std::size_t i = 0; i < n && pos_ < doc_.size(); ++i, ++pos_) {
    if (doc_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
  }
}

void XmlReader::skip_whitespace() {
  while (!at_end() && is_space(peek())) advance();
}

void XmlReader::skip_past(std::string_view terminator, std::string_view what) {
  const std::size_t line = line_;
  const std::size_t column = column_;
  while (!at_end() && !starts_with(terminator)) advance();
  if (at_end()) fail_at("unterminated " + std::string(what), line, column);
  advance(terminator.size());
}

void XmlReader::skip_doctype() {
  const std::size_t line = line_;
  const std::size_t column = column_;
  int bracket_depth = 0;
  while (!at_end()) {
    const char c = peek();
    if (c == '[') ++bracket_depth;
    else if (c == ']') --bracket_depth;
    else if (c == '>' && bracket_depth == 0) {
      advance();
      return;
    }
    advance();
  }
  fail_at("unterminated DOCTYPE", line, column);
}

std::string XmlReader::read_name() {
  if (at_end() || !is_name_start(static_cast<unsigned char>(peek()))) fail("expected a name");
  const std::size_t start = pos_;
  while (!at_end() && is_name_char(static_cast<unsigned char>(peek()))) advance();
  return std::string(doc_.substr(start, pos_ - start));
}

void XmlReader::append_reference(std::string& out) {
  const std::size_t line = line_;
  const std::size_t column = column_;
  advance();  // '&'
  const std::size_t start = pos_;
  while (!at_end() && peek() != ';' && pos_ - start < 12) advance();
  if (peek() != ';') fail_at("unterminated entity reference", line, column);
  const std::string_view ref = doc_.substr(start, pos_ - start);
  advance();
  if (ref == "lt") out += '<';
  else if (ref == "gt") out += '>';
  else if (ref == "amp") out += '&';
  else if (ref == "quot") out += '"';
  else if (ref == "apos") out += '\'';
  else if (ref.size() > 1 && ref[0] == '#') {
    std::uint32_t cp = 0;
    const bool hex = ref[1] == 'x' || ref[1] == 'X';
    const std::string_view digits = ref.substr(hex ? 2 : 1);
    if (digits.empty()) fail_at("empty character reference", line, column);
    for (char c : digits) {
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else fail_at("invalid character reference &" + std::string(ref) + ";", line, column);
      cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
      if (cp > 0x10FFFF) fail_at("character reference out of range", line, column);
    }
    if (cp == 0) fail_at("character reference to NUL", line, column);
    append_utf8(out, cp);
  } else {
    fail_at("unknown entity &" + std::string(ref) + ";", line, column);
  }
}

std::string XmlReader::read_attribute_value() {
  const char quote = peek();
  if (quote != '"' && quote != '\'') fail("attribute value must be quoted");
  const std::size_t line = line_;
  const std::size_t column = column_;
  advance();
  std::string value;
  while (true) {
    if (at_end()) fail_at("unterminated attribute value", line, column);
    const char c = peek();
    if (c == quote) {
      advance();
      return value;
    }
    if (c == '<') fail("'<' is not allowed in attribute values");
    if (c == '&') {
      append_reference(value);
      continue;
    }
    value += (c == '\n' || c == '\r' || c == '\t') ? ' ' : c;
    advance();
  }
}

XmlToken XmlReader::read_start_tag() {
  XmlToken tok;
  tok.kind = XmlToken::Kind::StartElement;
  tok.line = line_;
  tok.column = column_;
  if (open_.empty() && root_seen_) fail("content after the document element");
  advance();  // '<'
  tok.name = read_name();
  while (true) {
    const bool had_space = !at_end() && is_space(peek());
    skip_whitespace();
    if (at_end()) fail_at("unterminated start tag <" + tok.name + ">", tok.line, tok.column);
    if (starts_with("/>")) {
      advance(2);
      pending_end_ = true;
      pending_name_ = tok.name;
      break;
    }
    if (peek() == '>') {
      advance();
      open_.push_back(tok.name);
      break;
    }
    if (!had_space) fail("expected whitespace before attribute");
    const std::size_t attr_line = line_;
    const std::size_t attr_column = column_;
    std::string key = read_name();
    skip_whitespace();
    if (peek() != '=') fail("expected '=' after attribute name '" + key + "'");
    advance();
    skip_whitespace();
    std::string value = read_attribute_value();
    if (tok.attribute(key) != nullptr)
      fail_at("duplicate attribute '" + key + "'", attr_line, attr_column);
    tok.attributes.emplace_back(std::move(key), std::move(value));
  }
  root_seen_ = true;
  return tok;
}

XmlToken XmlReader::read_end_tag() {
  XmlToken tok;
  tok.kind = XmlToken::Kind::EndElement;
  tok.line = line_;
  tok.column = column_;
  advance(2);  // "</"
  tok.name = read_name();
  skip_whitespace();
  if (peek() != '>') fail("expected '>' to close end tag </" + tok.name + ">");
  advance();
  if (open_.empty()) fail_at("unexpected end tag </" + tok.name + ">", tok.line, tok.column);
  if (open_.back() != tok.name)
    fail_at("mismatched end tag </" + tok.name + ">, expected </" + open_.back() + ">", tok.line,
            tok.column);
  open_.pop_back();
  return tok;
}

XmlToken XmlReader::next() {
  if (pending_end_) {
    pending_end_ = false;
    XmlToken tok;
    tok.kind = XmlToken::Kind::EndElement;
    tok.name = std::move(pending_name_);
    tok.line = line_;
    tok.column = column_;
    return tok;
  }

  while (true) {
    if (at_end()) {
      if (!open_.empty()) fail("unexpected end of document inside <" + open_.back() + ">");
      if (!root_seen_) fail("document has no root element");
      XmlToken tok;
      tok.line = line_;
      tok.column = column_;
      return tok;
    }

    if (peek() == '<') {
      if (starts_with("<?")) {
        skip_past("?>", "processing instruction");
        continue;
      }
      if (starts_with("<!--")) {
        skip_past("-->", "comment");
        continue;
      }
      if (starts_with("<![CDATA[")) {
        if (open_.empty()) fail("CDATA section outside the document element");
        XmlToken tok;
        tok.kind = XmlToken::Kind::Text;
        tok.line = line_;
        tok.column = column_;
        advance(9);
        const std::size_t start = pos_;
        skip_past("]]>", "CDATA section");
        tok.text = std::string(doc_.substr(start, pos_ - start - 3));
        return tok;
      }
      if (starts_with("<!DOCTYPE")) {
        if (root_seen_) fail("DOCTYPE after the document element");
        skip_doctype();
        continue;
      }
      if (starts_with("</")) return read_end_tag();
      return read_start_tag();
    }

    XmlToken tok;
    tok.kind = XmlToken::Kind::Text;
    tok.line = line_;
    tok.column = column_;
    bool blank = true;
    while (!at_end() && peek() != '<') {
      if (peek() == '&') {
        append_reference(tok.text);
        blank = false;
        continue;
      }
      if (!is_space(peek())) blank = false;
      tok.text += peek();
      advance();
    }
    if (open_.empty()) {
      if (!blank) fail_at("text outside the document element", tok.line, tok.column);
      continue;
    }
    return tok;
  }
}

}  // namespace cpm::detail
