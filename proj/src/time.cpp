#include "cpm/time.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace cpm {
namespace {

using namespace std::chrono;

struct Fields {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
  int millis = 0;
  int offset_minutes = 0;
};

class Cursor {
public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void skip_space() {
    while (!done() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  // Reads between min_digits and max_digits decimal digits.
  bool digits(int min_digits, int max_digits, int& out) {
    int n = 0;
    int value = 0;
    while (n < max_digits && !done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      value = value * 10 + (s_[pos_] - '0');
      ++pos_;
      ++n;
    }
    if (n < min_digits) return false;
    out = value;
    return true;
  }

  // Fractional digits; keeps the first three, ignores the rest.
  bool fraction(int& millis) {
    int n = 0;
    int value = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      if (n < 3) value = value * 10 + (s_[pos_] - '0');
      ++pos_;
      ++n;
    }
    if (n == 0) return false;
    for (int i = n; i < 3; ++i) value *= 10;
    millis = value;
    return true;
  }

  bool offset(int& minutes) {
    if (accept('Z') || accept('z')) {
      minutes = 0;
      return true;
    }
    int sign = 0;
    if (accept('+')) sign = 1;
    else if (accept('-')) sign = -1;
    else return false;
    int hh = 0;
    int mm = 0;
    if (!digits(2, 2, hh)) return false;
    accept(':');
    if (std::isdigit(static_cast<unsigned char>(peek())) && !digits(2, 2, mm)) return false;
    if (hh > 23 || mm > 59) return false;
    minutes = sign * (hh * 60 + mm);
    return true;
  }

  bool month_name(unsigned& month) {
    static constexpr std::array<std::string_view, 12> names = {
        "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
    if (s_.size() - pos_ < 3) return false;
    std::string lower;
    for (int i = 0; i < 3; ++i) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(s_[pos_ + i])));
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (lower == names[i]) {
        month = static_cast<unsigned>(i + 1);
        pos_ += 3;
        return true;
      }
    }
    return false;
  }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<Timestamp> assemble(const Fields& f) {
  if (f.hour > 23 || f.minute > 59 || f.second > 59) return std::nullopt;
  const year_month_day ymd{year{f.year}, month{f.month}, day{f.day}};
  if (!ymd.ok()) return std::nullopt;
  const auto local = sys_days{ymd} + hours{f.hour} + minutes{f.minute} + seconds{f.second} +
                     milliseconds{f.millis};
  return time_point_cast<milliseconds>(local - minutes{f.offset_minutes});
}

bool parse_time_of_day(Cursor& c, Fields& f) {
  int m = 0;
  if (!c.digits(2, 2, f.hour) || !c.accept(':') || !c.digits(2, 2, m)) return false;
  f.minute = m;
  if (c.accept(':')) {
    if (!c.digits(2, 2, f.second)) return false;
    if (c.accept('.') || c.accept(',')) {
      if (!c.fraction(f.millis)) return false;
    }
  }
  return true;
}

bool parse_date(Cursor& c, Fields& f) {
  int mo = 0;
  int d = 0;
  if (!c.digits(4, 4, f.year) || !c.accept('-') || !c.digits(2, 2, mo) || !c.accept('-') ||
      !c.digits(2, 2, d))
    return false;
  f.month = static_cast<unsigned>(mo);
  f.day = static_cast<unsigned>(d);
  return true;
}

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  Cursor c(text);
  c.skip_space();
  Fields f;
  if (!parse_date(c, f)) return std::nullopt;
  if (c.accept('T') || c.accept('t') || c.accept(' ')) {
    if (!parse_time_of_day(c, f)) return std::nullopt;
    c.skip_space();
    if (!c.done() && !c.offset(f.offset_minutes)) return std::nullopt;
  }
  c.skip_space();
  if (!c.done()) return std::nullopt;
  return assemble(f);
}

std::string format_iso8601(Timestamp ts) {
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss<milliseconds> tod{ts - day_point};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()), static_cast<int>(tod.subseconds().count()));
  return buf;
}

std::optional<Timestamp> parse_with_format(std::string_view text, std::string_view format) {
  if (format.empty() || format == "ISO8601" || format == "iso8601") return parse_iso8601(text);

  Cursor c(text);
  Fields f;
  for (std::size_t i = 0; i < format.size(); ++i) {
    const char fc = format[i];
    if (std::isspace(static_cast<unsigned char>(fc))) {
      c.skip_space();
      continue;
    }
    if (fc != '%') {
      if (!c.accept(fc)) return std::nullopt;
      continue;
    }
    if (++i >= format.size()) return std::nullopt;
    int v = 0;
    switch (format[i]) {
      case 'Y':
        if (!c.digits(4, 4, f.year)) return std::nullopt;
        break;
      case 'm':
        if (!c.digits(1, 2, v)) return std::nullopt;
        f.month = static_cast<unsigned>(v);
        break;
      case 'd':
        if (!c.digits(1, 2, v)) return std::nullopt;
        f.day = static_cast<unsigned>(v);
        break;
      case 'H':
        if (!c.digits(1, 2, f.hour)) return std::nullopt;
        break;
      case 'M':
        if (!c.digits(1, 2, f.minute)) return std::nullopt;
        break;
      case 'S':
        if (!c.digits(1, 2, f.second)) return std::nullopt;
        break;
      case 'f':
        if (!c.fraction(f.millis)) return std::nullopt;
        break;
      case 'z':
        if (!c.offset(f.offset_minutes)) return std::nullopt;
        break;
      case 'F':
        if (!parse_date(c, f)) return std::nullopt;
        break;
      case 'T':
        if (!c.digits(2, 2, f.hour) || !c.accept(':') || !c.digits(2, 2, f.minute) || !c.accept(':') ||
            !c.digits(2, 2, f.second))
          return std::nullopt;
        break;
      case 'b':
        if (!c.month_name(f.month)) return std::nullopt;
        break;
      case '%':
        if (!c.accept('%')) return std::nullopt;
        break;
      default:
        return std::nullopt;
    }
  }
  if (!c.done()) return std::nullopt;
  return assemble(f);
}

}  // namespace cpm
