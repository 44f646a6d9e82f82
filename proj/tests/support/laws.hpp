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

// Algebraic checks for the OLAP operators, shared by the unit suite and the
// acceptance binary. Each returns false with a reason instead of asserting.

#include <map>
#include <set>
#include <string>

#include "cbi/cube/validate.hpp"
#include "cbi/query/engine.hpp"
#include "cbi/query/operators.hpp"
#include "support/oracle.hpp"
#include "support/random_query.hpp"

namespace cbi::testing {

/// Random query without orderBy/limit over additive measures only, with at
/// least one dimension so that every operator has something to act on.
inline query::Query law_query(RandomQueryGenerator& gen) {
  query::Query q = gen.next(false);
  const auto& cube = gen.cube();
  std::erase_if(q.measures, [&](const std::string& m) {
    return cube.measure(m).kind == cube::MeasureKind::Avg;
  });
  if (q.measures.empty()) q.measures.push_back(cube.measures.front().name);
  if (q.dimensions.empty()) {
    q.dimensions.push_back(cube.dimensions[gen.pick(cube.dimensions.size())].name);
  }
  return q;
}

namespace detail {

inline Value combine(cube::MeasureKind kind, const Value& a, const Value& b) {
  switch (kind) {
    case cube::MeasureKind::Min: return b < a ? b : a;
    case cube::MeasureKind::Max: return a < b ? b : a;
    default:
      return a.kind() == Value::Kind::Decimal ? Value::decimal_cents(a.as_int() + b.as_int())
                                              : Value::integer(a.as_int() + b.as_int());
  }
}

}  // namespace detail

/// Every coarse group equals the combination of the fine groups that map
/// onto it, and no coarse group is missing or extra.
inline bool roll_up_additive(const query::Query& q, const cube::CubeSchema& cube,
                             const ssb::Dataset& ds, std::string* why) {
  const query::Query coarse_q = query::roll_up(q);
  if (coarse_q == q) return true;
  const query::ResultTable fine = query::execute(q, cube, ds);
  const query::ResultTable coarse = query::execute(coarse_q, cube, ds);

  const std::size_t n_keys = q.dimensions.size() + (q.time_dimension ? 1 : 0);
  const bool dropped = coarse_q.dimensions.size() < q.dimensions.size();
  const std::size_t changed = dropped ? q.dimensions.size() - 1 : q.dimensions.size();

  std::map<std::vector<Value>, std::vector<Value>> expected;
  for (const auto& row : fine.rows) {
    std::vector<Value> key;
    for (std::size_t c = 0; c < n_keys; ++c) {
      if (c != changed) {
        key.push_back(row[c]);
      } else if (!dropped) {
        const Date d{static_cast<int32_t>(row[c].as_int())};
        key.push_back(Value::date(query::bucket_time(d, coarse_q.time_dimension->granularity)));
      }
    }
    std::vector<Value> measures(row.begin() + static_cast<std::ptrdiff_t>(n_keys), row.end());
    auto [it, fresh] = expected.emplace(key, measures);
    if (!fresh) {
      for (std::size_t m = 0; m < measures.size(); ++m) {
        it->second[m] = detail::combine(cube.measure(q.measures[m]).kind, it->second[m], measures[m]);
      }
    }
  }
  const std::size_t coarse_keys = n_keys - (dropped ? 1 : 0);
  if (expected.size() != coarse.rows.size()) {
    if (why) *why = "roll_up: group counts differ";
    return false;
  }
  for (const auto& row : coarse.rows) {
    std::vector<Value> key(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(coarse_keys));
    auto it = expected.find(key);
    if (it == expected.end() ||
        !std::equal(it->second.begin(), it->second.end(),
                    row.begin() + static_cast<std::ptrdiff_t>(coarse_keys))) {
      if (why) *why = "roll_up: coarse group differs from sum of fine groups";
      return false;
    }
  }
  return true;
}

/// Drilling adds exactly the missing drill members, once, after the
/// existing dimensions, and drilling again changes nothing.
inline bool drill_down_dedupes(const query::Query& q, const cube::CubeSchema& cube, std::string* why) {
  for (const auto& name : q.measures) {
    const cube::Measure& m = cube.measure(name);
    if (m.drill_members.empty()) continue;
    const query::Query d = query::drill_down(q, cube, name);
    std::set<std::string> want(q.dimensions.begin(), q.dimensions.end());
    want.insert(m.drill_members.begin(), m.drill_members.end());
    const std::set<std::string> got(d.dimensions.begin(), d.dimensions.end());
    const bool prefix = std::equal(q.dimensions.begin(), q.dimensions.end(), d.dimensions.begin());
    if (got != want || got.size() != d.dimensions.size() || !prefix ||
        !(query::drill_down(d, cube, name) == d)) {
      if (why) *why = "drill_down on '" + name + "' did not deduplicate";
      return false;
    }
  }
  return true;
}

/// execute(slice_dice(q, f)) equals execute(q) with f applied to its rows,
/// for a random filter f on one of q's dimensions.
inline bool slice_dice_commutes(const query::Query& q, RandomQueryGenerator& gen,
                                const cube::CubeSchema& cube, const ssb::Dataset& ds,
                                std::string* why) {
  const std::size_t col = gen.pick(q.dimensions.size());
  const query::Filter f = gen.random_filter_on(q.dimensions[col]);

  query::Query before = q;
  if (f.op == query::FilterOp::In) {
    // slice_dice replaces an existing `in` on the member, so compare against
    // the query without it.
    std::erase_if(before.filters, [&](const query::Filter& g) {
      return g.op == query::FilterOp::In && g.member == f.member;
    });
  }
  const query::ResultTable sliced = query::execute(query::slice_dice(q, cube, {f}), cube, ds);
  query::ResultTable expected = query::execute(before, cube, ds);

  const auto binding = cube::resolve_column(cube, ds, cube.dimension(f.member).column);
  std::vector<Value> lits;
  for (const auto& l : f.values) lits.push_back(oracle_literal(l, binding->column->type()));
  std::erase_if(expected.rows, [&](const query::Row& r) { return !oracle_passes(r[col], f.op, lits); });

  if (!(sliced == expected)) {
    if (why) *why = "slice_dice with " + std::string(query::to_string(f.op)) + " on '" + f.member +
                    "' differs from filtering the result";
    return false;
  }
  return true;
}

}  // namespace cbi::testing
