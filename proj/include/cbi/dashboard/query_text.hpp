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

#include <string>
#include <variant>

#include "cbi/json_util.hpp"
#include "cbi/query/query.hpp"

namespace cbi::dashboard {

namespace detail {

inline std::string quoted(const std::string& s) { return Json(s).dump(); }

inline std::string names(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + quoted(v[i]);
  return out + "]";
}

// Strings quoted, integers bare, reals always with a fraction so that the
// three literal kinds never render alike.
inline std::string literal(const query::Literal& lit) {
  if (const auto* s = std::get_if<std::string>(&lit)) return quoted(*s);
  if (const auto* i = std::get_if<int64_t>(&lit)) return std::to_string(*i);
  std::string out = Json(std::get<double>(lit)).dump();
  if (out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

}  // namespace detail

/// GraphQL-like block rendering of a query. Deterministic, and injective
/// because every field is printed with its value in quoted or typed form.
inline std::string render_query_text(const query::Query& q) {
  using detail::quoted;
  std::string out = "query {\n  cube(name: " + quoted(q.cube) + ") {\n";
  out += "    measures: " + detail::names(q.measures) + "\n";
  out += "    dimensions: " + detail::names(q.dimensions) + "\n";
  if (!q.filters.empty()) {
    out += "    filters: [\n";
    for (const auto& f : q.filters) {
      out += "      {member: " + quoted(f.member) + ", operator: " + std::string(query::to_string(f.op)) +
             ", values: [";
      for (std::size_t i = 0; i < f.values.size(); ++i) out += (i ? ", " : "") + detail::literal(f.values[i]);
      out += "]}\n";
    }
    out += "    ]\n";
  }
  if (q.time_dimension) {
    const auto& td = *q.time_dimension;
    out += "    timeDimension: {member: " + quoted(td.member) +
           ", granularity: " + std::string(query::to_string(td.granularity));
    if (td.date_range) {
      out += ", dateRange: [" + quoted(td.date_range->first) + ", " + quoted(td.date_range->second) + "]";
    }
    out += "}\n";
  }
  if (!q.order_by.empty()) {
    out += "    orderBy: [";
    for (std::size_t i = 0; i < q.order_by.size(); ++i) {
      out += std::string(i ? ", " : "") + "{column: " + quoted(q.order_by[i].column) +
             ", direction: " + (q.order_by[i].descending ? "desc" : "asc") + "}";
    }
    out += "]\n";
  }
  if (q.limit) out += "    limit: " + std::to_string(*q.limit) + "\n";
  out += "  }\n}\n";
  return out;
}

}  // namespace cbi::dashboard
