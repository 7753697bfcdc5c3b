#include <array>
#include <cctype>
#include <cstdio>

#include "kwnet/corpus.hpp"

namespace kwnet {
namespace {

using namespace std::chrono;

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ == text_.size(); }

  bool literal(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool digits(std::size_t count, int& out) {
    if (pos_ + count > text_.size()) return false;
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const char c = text_[pos_ + i];
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      value = value * 10 + (c - '0');
    }
    pos_ += count;
    out = value;
    return true;
  }

  void skip_digits() {
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool word(std::string_view& out) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    out = text_.substr(start, pos_ - start);
    return pos_ > start;
  }

  // Optional "Z", "+HH:MM", "+HHMM" or "+HH". Returns false on a malformed offset.
  bool offset(int& minutes) {
    minutes = 0;
    if (done() || literal('Z') || literal('z')) return true;
    int sign = 0;
    if (literal('+')) {
      sign = 1;
    } else if (literal('-')) {
      sign = -1;
    } else {
      return false;
    }
    int hh = 0;
    int mm = 0;
    if (!digits(2, hh)) return false;
    if (!done()) {
      literal(':');
      if (!digits(2, mm)) return false;
    }
    if (hh > 23 || mm > 59) return false;
    minutes = sign * (hh * 60 + mm);
    return true;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::optional<Timestamp> make_instant(int y, int mo, int d, int h, int mi, int s,
                                      int offset_minutes) {
  if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)},
                            day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  if (h > 23 || mi > 59 || s > 59) return std::nullopt;
  const Timestamp ts =
      sys_days{date} + hours{h} + minutes{mi} + seconds{s} - minutes{offset_minutes};
  // Bucket labels carry four-digit years.
  const int utc_year = static_cast<int>(year_month_day{floor<days>(ts)}.year());
  if (utc_year < 1 || utc_year > 9999) return std::nullopt;
  return ts;
}

bool clock_time(Cursor& c, int& h, int& mi, int& s) {
  return c.digits(2, h) && c.literal(':') && c.digits(2, mi) && c.literal(':') && c.digits(2, s);
}

// YYYY-MM-DD[(T| )HH:MM:SS[.fff][offset]]
std::optional<Timestamp> parse_iso(std::string_view text) {
  Cursor c(text);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, off = 0;
  if (!(c.digits(4, y) && c.literal('-') && c.digits(2, mo) && c.literal('-') && c.digits(2, d))) {
    return std::nullopt;
  }
  if (!c.done()) {
    if (!(c.literal('T') || c.literal('t') || c.literal(' '))) return std::nullopt;
    if (!clock_time(c, h, mi, s)) return std::nullopt;
    if (c.literal('.')) c.skip_digits();
    c.literal(' ');
    if (!c.offset(off) || !c.done()) return std::nullopt;
  }
  return make_instant(y, mo, d, h, mi, s, off);
}

// MM-DD-YYYY HH:MM:SS, the older Trump Twitter Archive export format.
std::optional<Timestamp> parse_us(std::string_view text) {
  Cursor c(text);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!(c.digits(2, mo) && c.literal('-') && c.digits(2, d) && c.literal('-') && c.digits(4, y) &&
        c.literal(' ') && clock_time(c, h, mi, s) && c.done())) {
    return std::nullopt;
  }
  return make_instant(y, mo, d, h, mi, s, 0);
}

constexpr std::array<std::string_view, 12> kMonthNames = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

// Www Mmm DD HH:MM:SS +HHMM YYYY, the classic API created_at format.
std::optional<Timestamp> parse_api(std::string_view text) {
  Cursor c(text);
  std::string_view weekday;
  std::string_view month_name;
  int y = 0, d = 0, h = 0, mi = 0, s = 0, off = 0;
  if (!(c.word(weekday) && c.literal(' ') && c.word(month_name) && c.literal(' ') &&
        c.digits(2, d) && c.literal(' ') && clock_time(c, h, mi, s) && c.literal(' '))) {
    return std::nullopt;
  }
  if (!(c.offset(off) && c.literal(' ') && c.digits(4, y) && c.done())) return std::nullopt;
  int mo = 0;
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    if (kMonthNames[i] == month_name) mo = static_cast<int>(i) + 1;
  }
  return make_instant(y, mo, d, h, mi, s, off);
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  return text;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.size() < 10) return std::nullopt;
  if (std::isalpha(static_cast<unsigned char>(text[0]))) return parse_api(text);
  if (text[2] == '-') return parse_us(text);
  return parse_iso(text);
}

std::string format_timestamp(Timestamp ts) {
  const auto day_point = floor<days>(ts);
  const year_month_day date{day_point};
  const hh_mm_ss time{ts - day_point};
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()),
                static_cast<int>(time.hours().count()), static_cast<int>(time.minutes().count()),
                static_cast<int>(time.seconds().count()));
  return buffer;
}

}  // namespace kwnet
