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

#include <algorithm>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cbi/cube/cube.hpp"
#include "cbi/decimal.hpp"
#include "cbi/error.hpp"
#include "cbi/query/query.hpp"
#include "cbi/time.hpp"

// OLAP navigation as pure query-to-query transformations.

namespace cbi::query {

/// Appends the measure's drill members to the query dimensions, skipping
/// members already present.
inline Query drill_down(Query q, const cube::CubeSchema& cube, std::string_view measure) {
  const cube::Measure& m = cube.measure(measure);
  if (m.drill_members.empty()) {
    fail(ErrorKind::Unsupported, "measure '" + m.name + "' declares no drill members");
  }
  for (const auto& member : m.drill_members) {
    if (std::find(q.dimensions.begin(), q.dimensions.end(), member) == q.dimensions.end()) {
      q.dimensions.push_back(member);
    }
  }
  return q;
}

/// Drops the last dimension. With no dimensions left, coarsens the time
/// bucket day -> month -> year. A fully rolled-up query comes back as is.
inline Query roll_up(Query q) {
  if (!q.dimensions.empty()) {
    q.dimensions.pop_back();
    return q;
  }
  if (q.time_dimension) {
    auto& g = q.time_dimension->granularity;
    if (g == Granularity::Day) {
      g = Granularity::Month;
    } else if (g == Granularity::Month) {
      g = Granularity::Year;
    }
  }
  return q;
}

/// Literal kinds a member accepts, checked without touching data. The
/// engine re-checks decimal precision when it binds the query.
inline void check_filter_literals(const Filter& f, const cube::CubeSchema& cube) {
  check_filter_shape(f);
  const cube::Dimension* dim = cube.find_dimension(f.member);
  if (!dim) {
    fail(ErrorKind::NotFound, "filter member '" + f.member + "' is not a dimension of cube " +
                                  cube.name);
  }
  if (f.op == FilterOp::InDateRange && dim->kind != cube::DimensionKind::Time) {
    fail(ErrorKind::Type, "inDateRange requires a time member, '" + f.member + "' is not one");
  }
  for (const auto& lit : f.values) {
    const bool is_text = std::holds_alternative<std::string>(lit);
    bool ok = true;
    switch (dim->kind) {
      case cube::DimensionKind::String: ok = is_text; break;
      case cube::DimensionKind::Time: ok = is_text && parse_date(std::get<std::string>(lit)); break;
      case cube::DimensionKind::Number:
        ok = !is_text || parse_cents(std::get<std::string>(lit)).has_value();
        break;
    }
    if (!ok) {
      fail(ErrorKind::Type, "filter value '" + literal_display(lit) + "' does not match the " +
                                std::string(cube::to_string(dim->kind)) + " member '" +
                                f.member + "'");
    }
  }
}

/// Adds filters conjunctively. An `in` filter on a member that already has
/// an `in` filter replaces that filter in place.
inline Query slice_dice(Query q, const cube::CubeSchema& cube, const std::vector<Filter>& filters) {
  for (const auto& f : filters) check_filter_literals(f, cube);
  for (const auto& f : filters) {
    if (f.op == FilterOp::In) {
      auto existing = std::find_if(q.filters.begin(), q.filters.end(), [&](const Filter& g) {
        return g.op == FilterOp::In && g.member == f.member;
      });
      if (existing != q.filters.end()) {
        *existing = f;
        continue;
      }
    }
    q.filters.push_back(f);
  }
  return q;
}

}  // namespace cbi::query
