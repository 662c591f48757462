/*
 * Copyright 2026 The e2ecov Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "e2ecov/time.hpp"

#include <charconv>
#include <cstdio>

#include "e2ecov/errors.hpp"

namespace e2ecov {

namespace {

using namespace std::chrono;

[[noreturn]] void bad_time(std::string_view text, const char* why) {
  throw InputError("invalid timestamp '" + std::string(text) + "': " + why);
}

int read_digits(std::string_view text, std::size_t pos, std::size_t count,
                std::string_view whole) {
  if (pos + count > text.size()) bad_time(whole, "truncated");
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') bad_time(whole, "expected digit");
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
  if (pos >= text.size() || text[pos] != c) bad_time(whole, "unexpected separator");
}

Instant make_instant(int y, int mo, int d, int h, int mi, int s, std::string_view whole) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad_time(whole, "invalid calendar date");
  if (h > 23 || mi > 59 || s > 60) bad_time(whole, "invalid time of day");
  return time_point_cast<microseconds>(sys_days{ymd}) + hours{h} + minutes{mi} +
         seconds{s};
}

}  // namespace

Instant parse_rfc3339(std::string_view text) {
  int y = read_digits(text, 0, 4, text);
  expect(text, 4, '-', text);
  int mo = read_digits(text, 5, 2, text);
  expect(text, 7, '-', text);
  int d = read_digits(text, 8, 2, text);
  if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't' && text[10] != ' '))
    bad_time(text, "missing 'T'");
  int h = read_digits(text, 11, 2, text);
  expect(text, 13, ':', text);
  int mi = read_digits(text, 14, 2, text);
  expect(text, 16, ':', text);
  int s = read_digits(text, 17, 2, text);
  Instant t = make_instant(y, mo, d, h, mi, s, text);

  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    long long frac = 0;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 6) {
        frac = frac * 10 + (text[pos] - '0');
        ++digits;
      }
      ++pos;
    }
    if (digits == 0) bad_time(text, "empty fraction");
    for (; digits < 6; ++digits) frac *= 10;
    t += microseconds{frac};
  }
  if (pos >= text.size()) bad_time(text, "missing UTC offset");
  char zone = text[pos];
  if (zone == 'Z' || zone == 'z') {
    ++pos;
  } else if (zone == '+' || zone == '-') {
    int oh = read_digits(text, pos + 1, 2, text);
    expect(text, pos + 3, ':', text);
    int om = read_digits(text, pos + 4, 2, text);
    auto offset = hours{oh} + minutes{om};
    t = zone == '+' ? t - offset : t + offset;
    pos += 6;
  } else {
    bad_time(text, "invalid UTC offset");
  }
  if (pos != text.size()) bad_time(text, "trailing characters");
  return t;
}

std::string format_rfc3339(Instant t) {
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  auto since_midnight = t - day_point;
  long long us = since_midnight.count();
  long long secs = us / 1'000'000;
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%06lldZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), secs / 3600, (secs / 60) % 60,
                secs % 60, us % 1'000'000);
  return buf;
}

Instant from_epoch_millis(long long millis) { return Instant{milliseconds{millis}}; }

Instant from_epoch_micros(long long micros) { return Instant{microseconds{micros}}; }

Instant parse_time_bucket(std::string_view digits) {
  std::size_t n = digits.size();
  if (n != 8 && n != 10 && n != 12 && n != 14) bad_time(digits, "unsupported time bucket width");
  int y = read_digits(digits, 0, 4, digits);
  int mo = read_digits(digits, 4, 2, digits);
  int d = read_digits(digits, 6, 2, digits);
  int h = n >= 10 ? read_digits(digits, 8, 2, digits) : 0;
  int mi = n >= 12 ? read_digits(digits, 10, 2, digits) : 0;
  int s = n >= 14 ? read_digits(digits, 12, 2, digits) : 0;
  return make_instant(y, mo, d, h, mi, s, digits);
}

Duration parse_duration(std::string_view text) {
  std::string_view rest = text;
  bool negative = false;
  if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
    negative = rest.front() == '-';
    rest.remove_prefix(1);
  }
  long long value = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc{} || ptr == rest.data())
    throw InputError("invalid duration '" + std::string(text) + "'");
  std::string_view unit(ptr, rest.data() + rest.size() - ptr);
  Duration d;
  if (unit.empty() || unit == "s") {
    d = seconds{value};
  } else if (unit == "us") {
    d = microseconds{value};
  } else if (unit == "ms") {
    d = milliseconds{value};
  } else if (unit == "m" || unit == "min") {
    d = minutes{value};
  } else if (unit == "h") {
    d = hours{value};
  } else {
    throw InputError("invalid duration unit in '" + std::string(text) + "'");
  }
  return negative ? -d : d;
}

}  // namespace e2ecov
