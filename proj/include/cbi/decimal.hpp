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

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace cbi {

// Fixed-point decimals with two fractional digits, held as integer cents.

/// Accepts `[-]digits[.d[d]]`. More than two fractional digits is rejected
/// rather than rounded.
inline std::optional<int64_t> parse_cents(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    ++i;
  }
  int64_t whole = 0;
  std::size_t digits = 0;
  constexpr int64_t kMaxWhole = std::numeric_limits<int64_t>::max() / 100 - 1;
  for (; i < s.size() && s[i] != '.'; ++i, ++digits) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    whole = whole * 10 + (s[i] - '0');
    if (whole > kMaxWhole) return std::nullopt;
  }
  int64_t frac = 0;
  std::size_t frac_digits = 0;
  if (i < s.size()) {
    ++i;  // '.'
    for (; i < s.size(); ++i, ++frac_digits) {
      if (s[i] < '0' || s[i] > '9' || frac_digits == 2) return std::nullopt;
      frac = frac * 10 + (s[i] - '0');
    }
    if (frac_digits == 0) return std::nullopt;
    if (frac_digits == 1) frac *= 10;
  }
  if (digits == 0 && frac_digits == 0) return std::nullopt;
  const int64_t cents = whole * 100 + frac;
  return negative ? -cents : cents;
}

inline std::string format_cents(int64_t cents) {
  const bool negative = cents < 0;
  // Avoid overflow on INT64_MIN by working in unsigned space.
  uint64_t magnitude = negative ? (~static_cast<uint64_t>(cents) + 1)
                                : static_cast<uint64_t>(cents);
  std::string out = std::to_string(magnitude / 100);
  const uint64_t frac = magnitude % 100;
  out += '.';
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return negative ? "-" + out : out;
}

}  // namespace cbi
