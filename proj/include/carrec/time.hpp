// Copyright 2026 The carrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <cstdio>
#include <compare>
#include <string>
#include <string_view>

#include "carrec/error.hpp"

namespace carrec {

// Calendar date as days since 1970-01-01 (proleptic Gregorian, UTC).
struct Date {
  std::int32_t days = 0;
  auto operator<=>(const Date&) const = default;
};

// Instant as seconds since the Unix epoch (UTC, second resolution).
using Timestamp = std::int64_t;

struct CivilDate {
  int year = 1970;
  unsigned month = 1;  // 1..12
  unsigned day = 1;    // 1..31
};

namespace detail {

// Howard Hinnant's civil-date algorithms.
inline std::int32_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int>(doe) - 719468;
}

inline CivilDate civil_from_days(std::int32_t z) {
  z += 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y = static_cast<int>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return CivilDate{y + (m <= 2), m, d};
}

inline bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  int sign = 1;
  std::size_t i = 0;
  if (s[0] == '-') {
    sign = -1;
    i = 1;
    if (s.size() == 1) return false;
  }
  long v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
    if (v > 2'000'000'000L) return false;
  }
  out = static_cast<int>(sign * v);
  return true;
}

}  // namespace detail

inline Date make_date(int year, unsigned month, unsigned day) {
  if (month < 1 || month > 12 || day < 1 || day > 31)
    throw Error("invalid calendar date");
  return Date{detail::days_from_civil(year, month, day)};
}

inline CivilDate civil(Date d) { return detail::civil_from_days(d.days); }

inline int year_of(Date d) { return civil(d).year; }

inline int year_of(Timestamp t) {
  // Floor division so pre-epoch instants land in the right day.
  std::int64_t days = t / 86400;
  if (t % 86400 < 0) --days;
  return year_of(Date{static_cast<std::int32_t>(days)});
}

inline Date add_days(Date d, int n) { return Date{d.days + n}; }

// "YYYY-MM-DD"
inline Date parse_date(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() < 8 || s.size() > 10 ||
      !detail::parse_int(s.substr(0, s.find('-')), y))
    throw Error("unparseable date: '" + std::string(s) + "'");
  const auto p1 = s.find('-');
  const auto p2 = s.find('-', p1 + 1);
  if (p1 == std::string_view::npos || p2 == std::string_view::npos ||
      !detail::parse_int(s.substr(p1 + 1, p2 - p1 - 1), m) ||
      !detail::parse_int(s.substr(p2 + 1), d) || m < 1 || m > 12 || d < 1 ||
      d > 31)
    throw Error("unparseable date: '" + std::string(s) + "'");
  return Date{detail::days_from_civil(y, static_cast<unsigned>(m),
                                      static_cast<unsigned>(d))};
}

inline std::string format_date(Date d) {
  const CivilDate c = civil(d);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
  return buf;
}

// ISO-8601, UTC: "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS", optional trailing 'Z',
// 'T' or ' ' as the separator.
inline Timestamp parse_timestamp(std::string_view s) {
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z'))
    s.remove_suffix(1);
  std::size_t sep = s.find('T');
  if (sep == std::string_view::npos) sep = s.find(' ');
  const std::string_view date_part =
      sep == std::string_view::npos ? s : s.substr(0, sep);
  const Date d = parse_date(date_part);
  std::int64_t secs = static_cast<std::int64_t>(d.days) * 86400;
  if (sep != std::string_view::npos) {
    const std::string_view tod = s.substr(sep + 1);
    int h = 0, mi = 0, se = 0;
    const auto c1 = tod.find(':');
    const auto c2 = c1 == std::string_view::npos
                        ? std::string_view::npos
                        : tod.find(':', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
        !detail::parse_int(tod.substr(0, c1), h) ||
        !detail::parse_int(tod.substr(c1 + 1, c2 - c1 - 1), mi) ||
        !detail::parse_int(tod.substr(c2 + 1), se) || h < 0 || h > 23 ||
        mi < 0 || mi > 59 || se < 0 || se > 60)
      throw Error("unparseable timestamp: '" + std::string(s) + "'");
    secs += h * 3600 + mi * 60 + se;
  }
  return secs;
}

inline std::string format_timestamp(Timestamp t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    --days;
    rem += 86400;
  }
  const CivilDate c = detail::civil_from_days(static_cast<std::int32_t>(days));
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                c.year, c.month, c.day, static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace carrec
