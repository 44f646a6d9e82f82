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
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>

#include "cbi/decimal.hpp"
#include "cbi/time.hpp"

namespace cbi {

enum class ColumnType { Integer, Decimal, Text, Date };

constexpr std::string_view to_string(ColumnType t) {
  switch (t) {
    case ColumnType::Integer: return "integer";
    case ColumnType::Decimal: return "decimal";
    case ColumnType::Text: return "text";
    case ColumnType::Date: return "date";
  }
  return "?";
}

constexpr bool is_numeric(ColumnType t) {
  return t == ColumnType::Integer || t == ColumnType::Decimal;
}

/// A single typed cell. Integer, Decimal (cents) and Date (days) share the
/// integer payload; Real is only produced by averages.
class Value {
 public:
  enum class Kind { Integer, Decimal, Date, Text, Real };

  Value() = default;

  static Value integer(int64_t v) { return Value(Kind::Integer, v); }
  static Value decimal_cents(int64_t cents) { return Value(Kind::Decimal, cents); }
  static Value date(Date d) { return Value(Kind::Date, d.days); }
  static Value text(std::string s) {
    Value v;
    v.kind_ = Kind::Text;
    v.text_ = std::move(s);
    return v;
  }
  static Value real(double r) {
    Value v;
    v.kind_ = Kind::Real;
    v.real_ = r;
    return v;
  }
  static Value of_column(ColumnType t, int64_t raw) {
    switch (t) {
      case ColumnType::Decimal: return decimal_cents(raw);
      case ColumnType::Date: return date(Date{static_cast<int32_t>(raw)});
      default: return integer(raw);
    }
  }

  Kind kind() const noexcept { return kind_; }
  int64_t as_int() const noexcept { return int_; }
  double as_real() const noexcept { return real_; }
  const std::string& as_text() const noexcept { return text_; }

  std::string to_display() const {
    switch (kind_) {
      case Kind::Integer: return std::to_string(int_);
      case Kind::Decimal: return format_cents(int_);
      case Kind::Date: return format_date(Date{static_cast<int32_t>(int_)});
      case Kind::Text: return text_;
      case Kind::Real: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", real_);
        return buf;
      }
    }
    return {};
  }

  /// Total order: kind first, then payload.
  friend int compare(const Value& a, const Value& b) noexcept {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
    switch (a.kind_) {
      case Kind::Text: {
        const int c = a.text_.compare(b.text_);
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
      }
      case Kind::Real:
        return a.real_ < b.real_ ? -1 : (b.real_ < a.real_ ? 1 : 0);
      default:
        return a.int_ < b.int_ ? -1 : (b.int_ < a.int_ ? 1 : 0);
    }
  }

  friend bool operator==(const Value& a, const Value& b) noexcept {
    return compare(a, b) == 0;
  }
  friend bool operator<(const Value& a, const Value& b) noexcept {
    return compare(a, b) < 0;
  }

 private:
  Value(Kind k, int64_t v) : kind_(k), int_(v) {}

  Kind kind_ = Kind::Integer;
  int64_t int_ = 0;
  double real_ = 0.0;
  std::string text_;
};

}  // namespace cbi
