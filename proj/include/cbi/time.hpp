/*
 * Copyright 2026 The CBI Platform Authors
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
#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace cbi {

struct CivilDate {
  int32_t year;
  uint32_t month;  // 1..12
  uint32_t day;    // 1..31
};

// Howard Hinnant's days_from_civil / civil_from_days (proleptic Gregorian).
constexpr int32_t days_from_civil(CivilDate c) noexcept {
  const int32_t y = c.year - (c.month <= 2 ? 1 : 0);
  const int32_t era = (y >= 0 ? y : y - 399) / 400;
  const uint32_t yoe = static_cast<uint32_t>(y - era * 400);
  const uint32_t mp = c.month > 2 ? c.month - 3 : c.month + 9;
  const uint32_t doy = (153 * mp + 2) / 5 + c.day - 1;
  const uint32_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int32_t>(doe) - 719468;
}

constexpr CivilDate civil_from_days(int32_t z) noexcept {
  z += 719468;
  const int32_t era = (z >= 0 ? z : z - 146096) / 146097;
  const uint32_t doe = static_cast<uint32_t>(z - era * 146097);
  const uint32_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int32_t y = static_cast<int32_t>(yoe) + era * 400;
  const uint32_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const uint32_t mp = (5 * doy + 2) / 153;
  const uint32_t d = doy - (153 * mp + 2) / 5 + 1;
  const uint32_t m = mp < 10 ? mp + 3 : mp - 9;
  return CivilDate{y + (m <= 2 ? 1 : 0), m, d};
}

constexpr bool is_leap_year(int32_t y) noexcept {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

constexpr uint32_t days_in_month(int32_t y, uint32_t m) noexcept {
  constexpr uint32_t table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap_year(y) ? 29 : table[m - 1];
}

/// Calendar date stored as days since 1970-01-01.
struct Date {
  int32_t days = 0;

  static constexpr Date from_civil(int32_t y, uint32_t m, uint32_t d) noexcept {
    return Date{days_from_civil(CivilDate{y, m, d})};
  }
  constexpr CivilDate civil() const noexcept { return civil_from_days(days); }

  friend constexpr auto operator<=>(Date, Date) = default;
};

namespace detail {

inline bool parse_fixed_digits(std::string_view s, std::size_t pos,
                               std::size_t count, int64_t& out) {
  if (pos + count > s.size()) return false;
  int64_t v = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

/// Parses ISO `YYYY-MM-DD`; rejects out-of-range months and days.
inline std::optional<Date> parse_date(std::string_view s) {
  int64_t y, m, d;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!detail::parse_fixed_digits(s, 0, 4, y) ||
      !detail::parse_fixed_digits(s, 5, 2, m) ||
      !detail::parse_fixed_digits(s, 8, 2, d)) {
    return std::nullopt;
  }
  if (m < 1 || m > 12) return std::nullopt;
  if (d < 1 || d > days_in_month(static_cast<int32_t>(y), static_cast<uint32_t>(m)))
    return std::nullopt;
  return Date::from_civil(static_cast<int32_t>(y), static_cast<uint32_t>(m),
                          static_cast<uint32_t>(d));
}

inline std::string format_date(Date date) {
  const CivilDate c = date.civil();
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
  return buf;
}

/// UTC instant with second precision.
struct Timestamp {
  int64_t seconds = 0;

  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
};

/// Parses `YYYY-MM-DDTHH:MM:SSZ`.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  if (s.size() != 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' ||
      s[19] != 'Z') {
    return std::nullopt;
  }
  auto date = parse_date(s.substr(0, 10));
  int64_t hh, mm, ss;
  if (!date || !detail::parse_fixed_digits(s, 11, 2, hh) ||
      !detail::parse_fixed_digits(s, 14, 2, mm) ||
      !detail::parse_fixed_digits(s, 17, 2, ss)) {
    return std::nullopt;
  }
  if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
  return Timestamp{int64_t{date->days} * 86400 + hh * 3600 + mm * 60 + ss};
}

inline std::string format_timestamp(Timestamp t) {
  int64_t days = t.seconds / 86400;
  int64_t rem = t.seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  const CivilDate c = civil_from_days(static_cast<int32_t>(days));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", c.year,
                c.month, c.day, static_cast<int>(rem / 3600),
                static_cast<int>((rem / 60) % 60), static_cast<int>(rem % 60));
  return buf;
}

inline Timestamp system_now() {
  using namespace std::chrono;
  return Timestamp{
      duration_cast<seconds>(system_clock::now().time_since_epoch()).count()};
}

}  // namespace cbi
