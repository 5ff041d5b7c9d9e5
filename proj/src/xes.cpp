#include "cpm/xes.hpp"

#include <charconv>
#include <cstdlib>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>

#include "cpm/error.hpp"
#include "xml_reader.hpp"

namespace cpm {
namespace {

using detail::XmlReader;
using detail::XmlToken;
using Kind = XmlToken::Kind;

constexpr std::string_view kNameKey = "concept:name";
constexpr std::string_view kTimestampKey = "time:timestamp";

bool is_attribute_element(std::string_view name) {
  return name == "string" || name == "date" || name == "int" || name == "float" || name == "boolean" ||
         name == "id" || name == "list" || name == "container";
}

class XesParser {
public:
  explicit XesParser(std::string_view doc) : reader_(doc) {}

  EventLog parse() {
    const XmlToken root = next_markup();
    if (root.kind != Kind::StartElement)
      throw IngestionError("document has no <log> element");
    if (root.name != "log")
      throw IngestionError("root element is <" + root.name + ">, expected <log>");

    std::string name;
    std::vector<Trace> traces;
    while (true) {
      XmlToken tok = next_markup();
      if (tok.kind == Kind::EndElement) break;
      if (tok.name == "trace") {
        traces.push_back(parse_trace(traces.size()));
      } else if (is_attribute_element(tok.name)) {
        const auto attr = parse_attribute(tok, "log");
        if (attr.first == kNameKey) name = to_display_string(attr.second);
      } else {
        skip_element();
      }
    }
    while (next_markup().kind != Kind::EndOfDocument) {
    }
    return EventLog(std::move(name), std::move(traces));
  }

private:
  // Next token that is not character data. XES carries no text content.
  XmlToken next_markup() {
    while (true) {
      XmlToken tok = reader_.next();
      if (tok.kind != Kind::Text) return tok;
    }
  }

  void skip_element() {
    int depth = 1;
    while (depth > 0) {
      const XmlToken tok = next_markup();
      if (tok.kind == Kind::StartElement) ++depth;
      else if (tok.kind == Kind::EndElement) --depth;
    }
  }

  std::pair<std::string, Scalar> parse_attribute(const XmlToken& tok, const std::string& context) {
    const std::string* key = tok.attribute("key");
    if (key == nullptr)
      throw IngestionError(context + ": <" + tok.name + "> attribute at line " + std::to_string(tok.line) +
                           " has no key");
    if (tok.name == "list" || tok.name == "container")
      throw IngestionError(context + ": " + tok.name + " attribute '" + *key +
                           "' is not supported (flat XES profile only)");
    const std::string* raw = tok.attribute("value");
    if (raw == nullptr) throw IngestionError(context + ": attribute '" + *key + "' has no value");

    const XmlToken closing = next_markup();
    if (closing.kind != Kind::EndElement)
      throw IngestionError(context + ": attribute '" + *key +
                           "' has nested attributes, which are not supported");

    const auto bad = [&](std::string_view what) {
      return IngestionError(context + ": attribute '" + *key + "' has invalid " + std::string(what) +
                            " value '" + *raw + "'");
    };

    Scalar value;
    if (tok.name == "string" || tok.name == "id") {
      value = *raw;
    } else if (tok.name == "int") {
      std::int64_t v = 0;
      const auto res = std::from_chars(raw->data(), raw->data() + raw->size(), v);
      if (res.ec != std::errc{} || res.ptr != raw->data() + raw->size()) throw bad("int");
      value = v;
    } else if (tok.name == "float") {
      char* end = nullptr;
      const double v = std::strtod(raw->c_str(), &end);
      if (raw->empty() || end != raw->c_str() + raw->size()) throw bad("float");
      value = v;
    } else if (tok.name == "boolean") {
      if (*raw == "true" || *raw == "1") value = true;
      else if (*raw == "false" || *raw == "0") value = false;
      else throw bad("boolean");
    } else {
      const auto ts = parse_iso8601(*raw);
      if (!ts) throw bad("date");
      value = *ts;
    }
    return {*key, std::move(value)};
  }

  struct PendingEvent {
    std::optional<std::string> activity;
    std::optional<Timestamp> timestamp;
    AttributeMap attributes;
  };

  PendingEvent parse_event(const std::string& context) {
    PendingEvent ev;
    while (true) {
      const XmlToken tok = next_markup();
      if (tok.kind == Kind::EndElement) return ev;
      if (!is_attribute_element(tok.name))
        throw IngestionError(context + ": unsupported element <" + tok.name + "> inside <event>");
      auto [key, value] = parse_attribute(tok, context);
      if (key == kNameKey) {
        ev.activity = to_display_string(value);
      } else if (key == kTimestampKey) {
        if (const auto* ts = std::get_if<Timestamp>(&value)) {
          ev.timestamp = *ts;
        } else if (const auto parsed = parse_iso8601(to_display_string(value))) {
          ev.timestamp = *parsed;
        } else {
          throw IngestionError(context + ": time:timestamp is not a date");
        }
      } else {
        ev.attributes.insert_or_assign(std::move(key), std::move(value));
      }
    }
  }

  Trace parse_trace(std::size_t index) {
    const std::string context = "trace #" + std::to_string(index);
    std::optional<std::string> case_id;
    AttributeMap attributes;
    std::vector<PendingEvent> pending;
    while (true) {
      const XmlToken tok = next_markup();
      if (tok.kind == Kind::EndElement) break;
      if (tok.name == "event") {
        pending.push_back(parse_event(context + ", event " + std::to_string(pending.size())));
      } else if (is_attribute_element(tok.name)) {
        auto [key, value] = parse_attribute(tok, context);
        if (key == kNameKey) case_id = to_display_string(value);
        else attributes.insert_or_assign(std::move(key), std::move(value));
      } else {
        throw IngestionError(context + ": unsupported element <" + tok.name + "> inside <trace>");
      }
    }

    if (!case_id || case_id->empty()) throw IngestionError(context + " has no concept:name (case id)");
    const std::string label = "trace '" + *case_id + "'";
    if (pending.empty()) throw IngestionError(label + " has no events");

    Trace trace;
    trace.case_id = std::move(*case_id);
    trace.attributes = std::move(attributes);
    trace.events.reserve(pending.size());
    for (std::size_t i = 0; i < pending.size(); ++i) {
      auto& p = pending[i];
      const std::string where = label + ", event " + std::to_string(i);
      if (!p.activity || p.activity->empty()) throw IngestionError(where + ": missing concept:name");
      if (!p.timestamp) throw IngestionError(where + ": missing time:timestamp");
      trace.events.push_back(Event{std::move(*p.activity), *p.timestamp, std::move(p.attributes)});
    }
    return trace;
  }

  XmlReader reader_;
};

void escape_attribute(std::ostream& out, std::string_view text) {
  for (const char c : text) {
    switch (c) {
      case '&': out << "&amp;"; break;
      case '<': out << "&lt;"; break;
      case '>': out << "&gt;"; break;
      case '"': out << "&quot;"; break;
      case '\n': out << "&#10;"; break;
      case '\r': out << "&#13;"; break;
      case '\t': out << "&#9;"; break;
      default: out << c;
    }
  }
}

std::string_view element_for(const Scalar& value) {
  switch (type_of(value)) {
    case ScalarType::Int: return "int";
    case ScalarType::Float: return "float";
    case ScalarType::Boolean: return "boolean";
    case ScalarType::Date: return "date";
    default: return "string";
  }
}

void write_attribute(std::ostream& out, std::string_view indent, std::string_view key, const Scalar& value) {
  out << indent << '<' << element_for(value) << " key=\"";
  escape_attribute(out, key);
  out << "\" value=\"";
  escape_attribute(out, to_display_string(value));
  out << "\"/>\n";
}

}  // namespace

EventLog parse_xes(std::string_view document) { return XesParser(document).parse(); }

EventLog parse_xes(std::istream& input) {
  const std::string content{std::istreambuf_iterator<char>(input), std::istreambuf_iterator<char>()};
  return parse_xes(std::string_view(content));
}

void write_xes(const EventLog& log, std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<log xes.version=\"1849-2016\" xes.features=\"\" xmlns=\"http://www.xes-standard.org/\">\n"
         "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n"
         "  <extension name=\"Time\" prefix=\"time\" uri=\"http://www.xes-standard.org/time.xesext\"/>\n";
  if (!log.name().empty()) write_attribute(out, "  ", kNameKey, Scalar{log.name()});
  for (const auto& trace : log.traces()) {
    out << "  <trace>\n";
    write_attribute(out, "    ", kNameKey, Scalar{trace.case_id});
    for (const auto& [key, value] : trace.attributes) write_attribute(out, "    ", key, value);
    for (const auto& event : trace.events) {
      out << "    <event>\n";
      write_attribute(out, "      ", kNameKey, Scalar{event.activity});
      write_attribute(out, "      ", kTimestampKey, Scalar{event.timestamp});
      for (const auto& [key, value] : event.attributes) write_attribute(out, "      ", key, value);
      out << "    </event>\n";
    }
    out << "  </trace>\n";
  }
  out << "</log>\n";
}

std::string write_xes(const EventLog& log) {
  std::ostringstream out;
  write_xes(log, out);
  return out.str();
}

}  // namespace cpm
