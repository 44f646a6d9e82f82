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

// Brute-force reference for query execution. Row-major: every fact row is
// materialized as Values, joins are resolved by linear search over the
// dimension table, and groups live in an ordered std::map. Shares nothing
// with the engine beyond the dataset and the query/cube value types.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cbi/cube/cube.hpp"
#include "cbi/query/query.hpp"
#include "cbi/query/result.hpp"
#include "cbi/ssb/table.hpp"

namespace cbi::testing {

struct OracleColumn {
  const ssb::Table* table = nullptr;
  std::size_t index = 0;
  std::optional<std::size_t> join;
};

inline OracleColumn oracle_resolve(const cube::CubeSchema& cube, const ssb::Dataset& ds,
                                   const std::string& ref) {
  std::string table_name = cube.base_table;
  std::string column = ref;
  auto dot = ref.find('.');
  if (dot != std::string::npos) {
    table_name = ref.substr(0, dot);
    column = ref.substr(dot + 1);
  }
  const ssb::Table& base = ds.table(cube.base_table);
  if (table_name == cube.base_table) {
    if (auto idx = base.schema().index_of(column)) return {&base, *idx, std::nullopt};
    if (dot != std::string::npos) throw std::runtime_error("oracle: unresolved " + ref);
  }
  for (std::size_t j = 0; j < cube.joins.size(); ++j) {
    if (dot != std::string::npos && cube.joins[j].table != table_name) continue;
    const ssb::Table& t = ds.table(cube.joins[j].table);
    if (auto idx = t.schema().index_of(column)) return {&t, *idx, j};
  }
  throw std::runtime_error("oracle: unresolved " + ref);
}

// Row of `table` whose primary key equals the fact's foreign key, by scan.
inline std::size_t oracle_join_row(const ssb::Table& fact, const ssb::Table& dim,
                                   const cube::Join& join, std::size_t fact_row) {
  const Value key = fact.column(join.foreign_key).value_at(fact_row);
  const ssb::Column& pk = dim.column(join.primary_key);
  for (std::size_t r = 0; r < dim.row_count(); ++r) {
    if (pk.value_at(r) == key) return r;
  }
  throw std::runtime_error("oracle: dangling foreign key");
}

inline Value oracle_literal(const query::Literal& lit, ColumnType type) {
  switch (type) {
    case ColumnType::Text:
      return Value::text(std::get<std::string>(lit));
    case ColumnType::Date:
      return Value::date(*parse_date(std::get<std::string>(lit)));
    case ColumnType::Integer:
      if (auto i = std::get_if<int64_t>(&lit)) return Value::integer(*i);
      if (auto d = std::get_if<double>(&lit)) return Value::integer(static_cast<int64_t>(*d));
      return Value::integer(std::stoll(std::get<std::string>(lit)));
    case ColumnType::Decimal:
      if (auto i = std::get_if<int64_t>(&lit)) return Value::decimal_cents(*i * 100);
      if (auto d = std::get_if<double>(&lit))
        return Value::decimal_cents(static_cast<int64_t>(std::llround(*d * 100.0)));
      return Value::decimal_cents(*parse_cents(std::get<std::string>(lit)));
  }
  return {};
}

inline bool oracle_passes(const Value& v, query::FilterOp op, const std::vector<Value>& lits) {
  using query::FilterOp;
  bool any_equal = false;
  for (const auto& l : lits) any_equal = any_equal || v == l;
  switch (op) {
    case FilterOp::Equals: return v == lits[0];
    case FilterOp::NotEquals: return !(v == lits[0]);
    case FilterOp::In: return any_equal;
    case FilterOp::NotIn: return !any_equal;
    case FilterOp::Gt: return lits[0] < v;
    case FilterOp::Gte: return !(v < lits[0]);
    case FilterOp::Lt: return v < lits[0];
    case FilterOp::Lte: return !(lits[0] < v);
    case FilterOp::InDateRange: return !(v < lits[0]) && !(lits[1] < v);
  }
  return false;
}

struct OracleAcc {
  int64_t count = 0;
  int64_t sum = 0;
  std::optional<Value> min, max;
};

inline query::ResultTable oracle_execute(const query::Query& q, const cube::CubeSchema& cube,
                                         const ssb::Dataset& ds) {
  using query::ResultColumn;
  const ssb::Table& fact = ds.table(cube.base_table);

  const auto value_of = [&](const OracleColumn& c, std::size_t fact_row) {
    std::size_t row = fact_row;
    if (c.join) row = oracle_join_row(fact, *c.table, cube.joins[*c.join], fact_row);
    return c.table->columns()[c.index].value_at(row);
  };
  const auto type_of = [](const OracleColumn& c) {
    return c.table->schema().columns[c.index].type;
  };

  query::ResultTable out;
  std::vector<OracleColumn> keys;
  std::vector<std::optional<query::Granularity>> buckets;
  for (const auto& d : q.dimensions) {
    const auto& dim = cube.dimension(d);
    keys.push_back(oracle_resolve(cube, ds, dim.column));
    buckets.push_back(std::nullopt);
    out.header.push_back({d, ResultColumn::Role::Dimension, std::string(cube::to_string(dim.kind)), ""});
  }
  struct F {
    OracleColumn col;
    query::FilterOp op;
    std::vector<Value> lits;
  };
  std::vector<F> filters;
  for (const auto& f : q.filters) {
    auto col = oracle_resolve(cube, ds, cube.dimension(f.member).column);
    F bound{col, f.op, {}};
    for (const auto& l : f.values) bound.lits.push_back(oracle_literal(l, type_of(col)));
    filters.push_back(std::move(bound));
  }
  if (q.time_dimension) {
    const auto& td = *q.time_dimension;
    auto col = oracle_resolve(cube, ds, cube.dimension(td.member).column);
    keys.push_back(col);
    buckets.push_back(td.granularity);
    out.header.push_back({td.member + "." + std::string(query::to_string(td.granularity)),
                          ResultColumn::Role::TimeDimension, "time", ""});
    if (td.date_range) {
      filters.push_back(F{col, query::FilterOp::InDateRange,
                          {Value::date(*parse_date(td.date_range->first)),
                           Value::date(*parse_date(td.date_range->second))}});
    }
  }
  std::vector<std::optional<OracleColumn>> measure_cols;
  for (const auto& m : q.measures) {
    const auto& measure = cube.measure(m);
    measure_cols.push_back(measure.column ? std::optional(oracle_resolve(cube, ds, *measure.column))
                                          : std::nullopt);
    out.header.push_back({m, ResultColumn::Role::Measure, std::string(cube::to_string(measure.kind)),
                          measure.format == cube::MeasureFormat::Currency ? "currency" : ""});
  }

  std::map<std::vector<Value>, std::vector<OracleAcc>> groups;
  for (std::size_t r = 0; r < fact.row_count(); ++r) {
    bool keep = true;
    for (const auto& f : filters) {
      if (!oracle_passes(value_of(f.col, r), f.op, f.lits)) {
        keep = false;
        break;
      }
    }
    if (!keep) continue;
    std::vector<Value> key;
    for (std::size_t k = 0; k < keys.size(); ++k) {
      Value v = value_of(keys[k], r);
      if (buckets[k]) {
        CivilDate c = Date{static_cast<int32_t>(v.as_int())}.civil();
        if (*buckets[k] == query::Granularity::Month) c.day = 1;
        if (*buckets[k] == query::Granularity::Year) c.day = 1, c.month = 1;
        v = Value::date(Date::from_civil(c.year, c.month, c.day));
      }
      key.push_back(std::move(v));
    }
    auto& accs = groups[key];
    accs.resize(q.measures.size());
    for (std::size_t m = 0; m < q.measures.size(); ++m) {
      auto& a = accs[m];
      ++a.count;
      if (!measure_cols[m]) continue;
      Value v = value_of(*measure_cols[m], r);
      a.sum += v.as_int();
      if (!a.min || v < *a.min) a.min = v;
      if (!a.max || *a.max < v) a.max = v;
    }
  }

  for (const auto& [key, accs] : groups) {
    query::Row row = key;
    for (std::size_t m = 0; m < q.measures.size(); ++m) {
      const auto& measure = cube.measure(q.measures[m]);
      const auto& a = accs[m];
      const ColumnType t = measure_cols[m] ? type_of(*measure_cols[m]) : ColumnType::Integer;
      switch (measure.kind) {
        case cube::MeasureKind::Count: row.push_back(Value::integer(a.count)); break;
        case cube::MeasureKind::Sum: row.push_back(Value::of_column(t, a.sum)); break;
        case cube::MeasureKind::Min: row.push_back(*a.min); break;
        case cube::MeasureKind::Max: row.push_back(*a.max); break;
        case cube::MeasureKind::Avg:
          row.push_back(Value::real(static_cast<double>(a.sum) / static_cast<double>(a.count) /
                                    (t == ColumnType::Decimal ? 100.0 : 1.0)));
          break;
      }
    }
    out.rows.push_back(std::move(row));
  }

  for (auto it = q.order_by.rbegin(); it != q.order_by.rend(); ++it) {
    const std::size_t c = *out.column_index(it->column);
    const bool desc = it->descending;
    std::stable_sort(out.rows.begin(), out.rows.end(), [&](const query::Row& a, const query::Row& b) {
      return desc ? b[c] < a[c] : a[c] < b[c];
    });
  }
  if (q.limit && out.rows.size() > static_cast<std::size_t>(*q.limit)) out.rows.resize(*q.limit);
  return out;
}

/// Exact equality; Real cells within `rel_tol` relative error.
inline bool results_match(const query::ResultTable& a, const query::ResultTable& b,
                          std::string* why = nullptr, double rel_tol = 1e-9) {
  const auto reject = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!(a.header == b.header)) return reject("headers differ");
  if (a.rows.size() != b.rows.size()) {
    return reject("row counts differ: " + std::to_string(a.rows.size()) + " vs " +
                  std::to_string(b.rows.size()));
  }
  for (std::size_t r = 0; r < a.rows.size(); ++r) {
    if (a.rows[r].size() != b.rows[r].size()) return reject("row widths differ");
    for (std::size_t c = 0; c < a.rows[r].size(); ++c) {
      const Value& x = a.rows[r][c];
      const Value& y = b.rows[r][c];
      if (x.kind() == Value::Kind::Real && y.kind() == Value::Kind::Real) {
        const double scale = std::max(std::fabs(x.as_real()), std::fabs(y.as_real()));
        if (std::fabs(x.as_real() - y.as_real()) > rel_tol * std::max(scale, 1e-300)) {
          return reject("row " + std::to_string(r) + " col " + std::to_string(c) + ": " +
                        x.to_display() + " vs " + y.to_display());
        }
      } else if (!(x == y)) {
        return reject("row " + std::to_string(r) + " col " + std::to_string(c) + ": " +
                      x.to_display() + " vs " + y.to_display());
      }
    }
  }
  return true;
}

}  // namespace cbi::testing
