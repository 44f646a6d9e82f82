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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cbi/error.hpp"
#include "cbi/json_util.hpp"

namespace cbi::query {

enum class FilterOp { Equals, NotEquals, In, NotIn, Gt, Gte, Lt, Lte, InDateRange };
enum class Granularity { Day, Month, Year };

constexpr std::string_view to_string(FilterOp op) {
  switch (op) {
    case FilterOp::Equals: return "equals";
    case FilterOp::NotEquals: return "notEquals";
    case FilterOp::In: return "in";
    case FilterOp::NotIn: return "notIn";
    case FilterOp::Gt: return "gt";
    case FilterOp::Gte: return "gte";
    case FilterOp::Lt: return "lt";
    case FilterOp::Lte: return "lte";
    case FilterOp::InDateRange: return "inDateRange";
  }
  return "?";
}

inline std::optional<FilterOp> filter_op_from(std::string_view s) {
  for (auto op : {FilterOp::Equals, FilterOp::NotEquals, FilterOp::In, FilterOp::NotIn,
                  FilterOp::Gt, FilterOp::Gte, FilterOp::Lt, FilterOp::Lte,
                  FilterOp::InDateRange}) {
    if (to_string(op) == s) return op;
  }
  return std::nullopt;
}

constexpr std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::Day: return "day";
    case Granularity::Month: return "month";
    case Granularity::Year: return "year";
  }
  return "?";
}

inline std::optional<Granularity> granularity_from(std::string_view s) {
  for (auto g : {Granularity::Day, Granularity::Month, Granularity::Year}) {
    if (to_string(g) == s) return g;
  }
  return std::nullopt;
}

/// Filter literal as written in the query document; typed against the
/// member only when the query is bound to a cube.
using Literal = std::variant<std::string, int64_t, double>;

inline std::string literal_display(const Literal& lit) {
  if (auto s = std::get_if<std::string>(&lit)) return *s;
  if (auto i = std::get_if<int64_t>(&lit)) return std::to_string(*i);
  return Json(std::get<double>(lit)).dump();
}

struct Filter {
  std::string member;
  FilterOp op = FilterOp::Equals;
  std::vector<Literal> values;

  friend bool operator==(const Filter&, const Filter&) = default;
};

struct TimeDimension {
  std::string member;
  Granularity granularity = Granularity::Day;
  std::optional<std::pair<std::string, std::string>> date_range;

  friend bool operator==(const TimeDimension&, const TimeDimension&) = default;
};

struct OrderTerm {
  std::string column;
  bool descending = false;

  friend bool operator==(const OrderTerm&, const OrderTerm&) = default;
};

struct Query {
  std::string cube;
  std::vector<std::string> measures;
  std::vector<std::string> dimensions;
  std::vector<Filter> filters;
  std::optional<TimeDimension> time_dimension;
  std::vector<OrderTerm> order_by;
  std::optional<int64_t> limit;

  friend bool operator==(const Query&, const Query&) = default;
};

/// Value-count rules per operator. Throws Validation.
inline void check_filter_shape(const Filter& f) {
  const std::string ctx = "filter on '" + f.member + "' (" + std::string(to_string(f.op)) + ")";
  switch (f.op) {
    case FilterOp::In:
    case FilterOp::NotIn:
      if (f.values.empty()) fail(ErrorKind::Validation, ctx + " needs at least one value");
      break;
    case FilterOp::InDateRange:
      if (f.values.size() != 2) fail(ErrorKind::Validation, ctx + " needs exactly two dates");
      break;
    default:
      if (f.values.size() != 1) fail(ErrorKind::Validation, ctx + " needs exactly one value");
      break;
  }
}

/// Invariants that need no cube. Throws Validation.
inline void check_shape(const Query& q) {
  if (q.measures.empty() && q.dimensions.empty()) {
    fail(ErrorKind::Validation, "query selects no measures and no dimensions");
  }
  if (q.limit && *q.limit < 1) fail(ErrorKind::Validation, "limit must be positive");
  for (const auto& f : q.filters) check_filter_shape(f);
}

namespace detail {

inline Literal literal_from_json(const Json& v, std::string_view ctx) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.get<int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ErrorKind::Validation, std::string(ctx) + ": non-finite value");
    return d;
  }
  fail(ErrorKind::Validation, std::string(ctx) + ": values must be strings or numbers");
}

inline Json literal_to_json(const Literal& lit) {
  return std::visit([](const auto& v) { return Json(v); }, lit);
}

inline std::vector<std::string> names_from_json(const Json& v, std::string_view ctx) {
  if (!v.is_array()) fail(ErrorKind::Validation, std::string(ctx) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) fail(ErrorKind::Validation, std::string(ctx) + " entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

inline void reject_unknown(const Json& obj, std::initializer_list<std::string_view> allowed,
                           std::string_view ctx) {
  try {
    json_fields::reject_unknown(obj, allowed, ctx);
  } catch (const Error& e) {
    throw Error(ErrorKind::Validation, e.what());
  }
}

inline std::string string_field(const Json& obj, std::string_view key, std::string_view ctx) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    fail(ErrorKind::Validation,
         std::string(ctx) + " needs string key '" + std::string(key) + "'");
  }
  return it->get<std::string>();
}

}  // namespace detail

/// Query document -> Query. Malformed documents raise Validation.
inline Query query_from_json(const Json& doc) {
  using namespace detail;
  if (!doc.is_object()) fail(ErrorKind::Validation, "query document must be an object");
  reject_unknown(doc, {"cube", "measures", "dimensions", "filters", "timeDimension", "orderBy",
                       "limit"},
                 "query document");
  Query q;
  q.cube = string_field(doc, "cube", "query document");
  if (auto it = doc.find("measures"); it != doc.end()) q.measures = names_from_json(*it, "measures");
  if (auto it = doc.find("dimensions"); it != doc.end()) {
    q.dimensions = names_from_json(*it, "dimensions");
  }
  if (auto it = doc.find("filters"); it != doc.end()) {
    if (!it->is_array()) fail(ErrorKind::Validation, "filters must be an array");
    for (const auto& f : *it) {
      if (!f.is_object()) fail(ErrorKind::Validation, "filter must be an object");
      reject_unknown(f, {"member", "operator", "values"}, "filter");
      Filter filter;
      filter.member = string_field(f, "member", "filter");
      const std::string op = string_field(f, "operator", "filter");
      auto parsed = filter_op_from(op);
      if (!parsed) fail(ErrorKind::Validation, "unknown filter operator '" + op + "'");
      filter.op = *parsed;
      auto values = f.find("values");
      if (values == f.end() || !values->is_array()) {
        fail(ErrorKind::Validation, "filter on '" + filter.member + "' needs a values array");
      }
      for (const auto& v : *values) filter.values.push_back(literal_from_json(v, "filter values"));
      q.filters.push_back(std::move(filter));
    }
  }
  if (auto it = doc.find("timeDimension"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) fail(ErrorKind::Validation, "timeDimension must be an object");
    reject_unknown(*it, {"member", "granularity", "dateRange"}, "timeDimension");
    TimeDimension td;
    td.member = string_field(*it, "member", "timeDimension");
    const std::string g = string_field(*it, "granularity", "timeDimension");
    auto gran = granularity_from(g);
    if (!gran) fail(ErrorKind::Validation, "unknown granularity '" + g + "'");
    td.granularity = *gran;
    if (auto r = it->find("dateRange"); r != it->end() && !r->is_null()) {
      if (!r->is_array() || r->size() != 2 || !(*r)[0].is_string() || !(*r)[1].is_string()) {
        fail(ErrorKind::Validation, "dateRange must be two date strings");
      }
      td.date_range = std::make_pair((*r)[0].get<std::string>(), (*r)[1].get<std::string>());
    }
    q.time_dimension = std::move(td);
  }
  if (auto it = doc.find("orderBy"); it != doc.end()) {
    if (!it->is_array()) fail(ErrorKind::Validation, "orderBy must be an array");
    for (const auto& o : *it) {
      if (!o.is_object()) fail(ErrorKind::Validation, "orderBy entries must be objects");
      reject_unknown(o, {"column", "direction"}, "orderBy entry");
      OrderTerm term;
      term.column = string_field(o, "column", "orderBy entry");
      if (auto d = o.find("direction"); d != o.end()) {
        if (*d == "desc") {
          term.descending = true;
        } else if (*d != "asc") {
          fail(ErrorKind::Validation, "orderBy direction must be 'asc' or 'desc'");
        }
      }
      q.order_by.push_back(std::move(term));
    }
  }
  if (auto it = doc.find("limit"); it != doc.end() && !it->is_null()) {
    if (!it->is_number_integer()) fail(ErrorKind::Validation, "limit must be an integer");
    q.limit = it->get<int64_t>();
  }
  check_shape(q);
  return q;
}

inline Query parse_query(std::string_view text) {
  return query_from_json(parse_json(text, "query"));
}

/// Canonical document: cube, measures, dimensions and filters always;
/// timeDimension, orderBy and limit only when set.
inline Json query_to_json(const Query& q) {
  Json doc = Json::object();
  doc["cube"] = q.cube;
  doc["measures"] = q.measures;
  doc["dimensions"] = q.dimensions;
  doc["filters"] = Json::array();
  for (const auto& f : q.filters) {
    Json values = Json::array();
    for (const auto& v : f.values) values.push_back(detail::literal_to_json(v));
    doc["filters"].push_back(
        Json{{"member", f.member}, {"operator", std::string(to_string(f.op))}, {"values", values}});
  }
  if (q.time_dimension) {
    Json td = Json::object();
    td["member"] = q.time_dimension->member;
    td["granularity"] = std::string(to_string(q.time_dimension->granularity));
    if (q.time_dimension->date_range) {
      td["dateRange"] = Json::array(
          {q.time_dimension->date_range->first, q.time_dimension->date_range->second});
    }
    doc["timeDimension"] = std::move(td);
  }
  if (!q.order_by.empty()) {
    doc["orderBy"] = Json::array();
    for (const auto& o : q.order_by) {
      doc["orderBy"].push_back(
          Json{{"column", o.column}, {"direction", o.descending ? "desc" : "asc"}});
    }
  }
  if (q.limit) doc["limit"] = *q.limit;
  return doc;
}

}  // namespace cbi::query
