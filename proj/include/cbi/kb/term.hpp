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

#include <cctype>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>

#include "cbi/error.hpp"
#include "cbi/time.hpp"

namespace cbi::kb {

inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

enum class LiteralType : uint8_t { Text, Integer, DateTime, Decimal, Geo };

/// Datatype IRI of a literal type, empty for plain text.
inline std::string datatype_iri(LiteralType t) {
  switch (t) {
    case LiteralType::Text: return {};
    case LiteralType::Integer: return std::string(kXsd) + "integer";
    case LiteralType::DateTime: return std::string(kXsd) + "dateTime";
    case LiteralType::Decimal: return std::string(kXsd) + "decimal";
    case LiteralType::Geo: return "https://w3id.org/cbiont/upo#geoPoint";
  }
  return {};
}

namespace detail {

inline bool is_iri_char(unsigned char c) {
  if (c <= 0x20) return false;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}':
    case '|': case '^': case '`': case '\\':
      return false;
    default:
      return true;
  }
}

inline bool valid_iri(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == s.size()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  for (unsigned char c : s) {
    if (!is_iri_char(c)) return false;
  }
  return true;
}

// Plain decimal lexical form: optional sign, digits, optional fraction.
inline bool valid_decimal(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (digits == 0) return false;
  if (i == s.size()) return true;
  if (s[i++] != '.') return false;
  std::size_t frac = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac;
  return frac > 0 && i == s.size();
}

inline bool parse_double(std::string_view s, double& out) {
  if (!valid_decimal(s)) return false;
  if (s[0] == '+') s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

/// Shortest fixed-notation rendering that reads back to the same double.
inline std::string fixed_decimal(double v) {
  char buf[400];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (ec != std::errc()) fail(ErrorKind::Internal, "cannot format coordinate");
  std::string out(buf, p);
  if (out.find('.') == std::string::npos) out += ".0";
  return out;
}

inline bool valid_geo(std::string_view s) {
  const auto comma = s.find(',');
  if (comma == std::string_view::npos) return false;
  double lat = 0, lon = 0;
  return parse_double(s.substr(0, comma), lat) && parse_double(s.substr(comma + 1), lon) &&
         lat >= -90 && lat <= 90 && lon >= -180 && lon <= 180;
}

inline bool valid_lexical(LiteralType t, std::string_view s) {
  switch (t) {
    case LiteralType::Text: return true;
    case LiteralType::Integer: {
      int64_t v = 0;
      const char* begin = s.data() + (!s.empty() && s[0] == '+' ? 1 : 0);
      auto [p, ec] = std::from_chars(begin, s.data() + s.size(), v);
      return !s.empty() && ec == std::errc() && p == s.data() + s.size();
    }
    case LiteralType::DateTime: return parse_timestamp(s).has_value();
    case LiteralType::Decimal: return valid_decimal(s);
    case LiteralType::Geo: return valid_geo(s);
  }
  return false;
}

}  // namespace detail

/// An RDF term: an IRI or a typed literal. Literals keep their lexical form;
/// typed accessors parse it on demand.
class Term {
 public:
  enum class Kind : uint8_t { Iri, Literal };

  Term() = default;

  static Term iri(std::string value) {
    if (!detail::valid_iri(value)) fail(ErrorKind::Validation, "malformed IRI '" + value + "'");
    return Term(Kind::Iri, LiteralType::Text, std::move(value));
  }
  static Term literal(LiteralType type, std::string lexical) {
    if (!detail::valid_lexical(type, lexical)) {
      fail(ErrorKind::Validation, "'" + lexical + "' is not a valid " +
                                      (type == LiteralType::Text ? "text" : datatype_iri(type)) +
                                      " literal");
    }
    return Term(Kind::Literal, type, std::move(lexical));
  }
  static Term text(std::string value) { return Term(Kind::Literal, LiteralType::Text, std::move(value)); }
  static Term integer(int64_t v) { return Term(Kind::Literal, LiteralType::Integer, std::to_string(v)); }
  static Term date_time(Timestamp t) {
    return Term(Kind::Literal, LiteralType::DateTime, format_timestamp(t));
  }
  static Term decimal(double v) {
    if (!std::isfinite(v)) fail(ErrorKind::Validation, "decimal literal must be finite");
    return Term(Kind::Literal, LiteralType::Decimal, detail::fixed_decimal(v));
  }
  static Term geo(double latitude, double longitude) {
    return literal(LiteralType::Geo,
                   detail::fixed_decimal(latitude) + "," + detail::fixed_decimal(longitude));
  }

  Kind kind() const noexcept { return kind_; }
  bool is_iri() const noexcept { return kind_ == Kind::Iri; }
  bool is_literal() const noexcept { return kind_ == Kind::Literal; }
  LiteralType literal_type() const noexcept { return type_; }
  /// IRI string or literal lexical form.
  const std::string& value() const noexcept { return value_; }

  int64_t as_integer() const {
    expect(LiteralType::Integer);
    return std::stoll(value_);
  }
  Timestamp as_timestamp() const {
    expect(LiteralType::DateTime);
    return *parse_timestamp(value_);
  }
  double as_decimal() const {
    expect(LiteralType::Decimal);
    double v = 0;
    detail::parse_double(value_, v);
    return v;
  }
  std::pair<double, double> as_geo() const {
    expect(LiteralType::Geo);
    const auto comma = value_.find(',');
    double lat = 0, lon = 0;
    detail::parse_double(std::string_view(value_).substr(0, comma), lat);
    detail::parse_double(std::string_view(value_).substr(comma + 1), lon);
    return {lat, lon};
  }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(Kind k, LiteralType t, std::string v) : kind_(k), type_(t), value_(std::move(v)) {}

  void expect(LiteralType t) const {
    if (kind_ != Kind::Literal || type_ != t) {
      fail(ErrorKind::Type, "term '" + value_ + "' is not a " + datatype_iri(t) + " literal");
    }
  }

  Kind kind_ = Kind::Iri;
  LiteralType type_ = LiteralType::Text;
  std::string value_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept {
    const std::size_t h = std::hash<std::string>{}(t.value());
    return h ^ (static_cast<std::size_t>(t.kind()) << 1 | static_cast<std::size_t>(t.literal_type()) << 4);
  }
};

inline Term iri(std::string_view value) { return Term::iri(std::string(value)); }

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Throws Validation unless subject and predicate are IRIs.
inline void check_triple(const Triple& t) {
  if (!t.subject.is_iri()) fail(ErrorKind::Validation, "triple subject must be an IRI");
  if (!t.predicate.is_iri()) fail(ErrorKind::Validation, "triple predicate must be an IRI");
}

/// Line-format rendering: `<iri>`, `"text"`, or `"lexical"^^<datatype>`.
inline std::string render(const Term& t) {
  if (t.is_iri()) return "<" + t.value() + ">";
  std::string out = "\"";
  for (char c : t.value()) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  if (t.literal_type() != LiteralType::Text) out += "^^<" + datatype_iri(t.literal_type()) + ">";
  return out;
}

inline std::string render(const Triple& t) {
  return render(t.subject) + " " + render(t.predicate) + " " + render(t.object) + " .";
}

}  // namespace cbi::kb
