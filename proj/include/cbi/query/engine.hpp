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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cbi/cube/cube.hpp"
#include "cbi/cube/validate.hpp"
#include "cbi/error.hpp"
#include "cbi/query/query.hpp"
#include "cbi/query/result.hpp"
#include "cbi/ssb/table.hpp"
#include "cbi/time.hpp"

namespace cbi::query {

/// Start date of the bucket containing `d`.
constexpr Date bucket_time(Date d, Granularity g) noexcept {
  if (g == Granularity::Day) return d;
  const CivilDate c = d.civil();
  return Date::from_civil(c.year, g == Granularity::Month ? c.month : 1, 1);
}

namespace detail {

struct Source {
  const ssb::Column* column = nullptr;
  std::optional<std::size_t> join;

  ColumnType type() const { return column->type(); }
};

// Fact-row -> dimension-row maps, built on first use by probing the
// dimension table's primary-key hash index once per fact row.
class JoinCache {
 public:
  JoinCache(const cube::CubeSchema& cube, const ssb::Dataset& ds, const ssb::Table& base)
      : cube_(cube), ds_(ds), base_(base), maps_(cube.joins.size()) {}

  std::size_t row(const Source& src, std::size_t fact_row) {
    return src.join ? map(*src.join)[fact_row] : fact_row;
  }

  const std::vector<uint32_t>& map(std::size_t j) {
    if (!maps_[j]) {
      const auto& spec = cube_.joins[j];
      const ssb::Table& dim = ds_.table(spec.table);
      auto keys = base_.column(spec.foreign_key).ints();
      std::vector<uint32_t> m(keys.size());
      for (std::size_t r = 0; r < keys.size(); ++r) {
        auto hit = dim.row_for_key(keys[r]);
        if (!hit) {
          fail(ErrorKind::Integrity, "fact row " + std::to_string(r + 1) + " has no " +
                                         spec.table + " row for key " + std::to_string(keys[r]));
        }
        m[r] = static_cast<uint32_t>(*hit);
      }
      maps_[j] = std::move(m);
    }
    return *maps_[j];
  }

 private:
  const cube::CubeSchema& cube_;
  const ssb::Dataset& ds_;
  const ssb::Table& base_;
  std::vector<std::optional<std::vector<uint32_t>>> maps_;
};

inline Source bind_source(const cube::CubeSchema& cube, const ssb::Dataset& ds,
                          const std::string& member, const std::string& column) {
  std::string why;
  auto b = cube::resolve_column(cube, ds, column, &why);
  if (!b) fail(ErrorKind::Schema, "member '" + member + "': " + why);
  return Source{b->column, b->join};
}

/// Converts a literal to the int64 payload of a numeric or date column.
inline int64_t numeric_payload(const Literal& lit, ColumnType type, const std::string& member) {
  const auto mismatch = [&]() -> int64_t {
    fail(ErrorKind::Type, "filter value '" + literal_display(lit) + "' does not match the " +
                              std::string(to_string(type)) + " member '" + member + "'");
  };
  if (type == ColumnType::Date) {
    auto s = std::get_if<std::string>(&lit);
    if (!s) return mismatch();
    auto d = parse_date(*s);
    if (!d) return mismatch();
    return d->days;
  }
  if (type == ColumnType::Integer) {
    if (auto i = std::get_if<int64_t>(&lit)) return *i;
    if (auto d = std::get_if<double>(&lit)) {
      if (std::trunc(*d) != *d || std::fabs(*d) > 9e15) return mismatch();
      return static_cast<int64_t>(*d);
    }
    const auto& s = std::get<std::string>(lit);
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return mismatch();
    return v;
  }
  // Decimal: cents.
  if (auto i = std::get_if<int64_t>(&lit)) {
    if (*i > std::numeric_limits<int64_t>::max() / 100 ||
        *i < std::numeric_limits<int64_t>::min() / 100) {
      return mismatch();
    }
    return *i * 100;
  }
  if (auto d = std::get_if<double>(&lit)) {
    const double cents = std::round(*d * 100.0);
    if (std::fabs(cents - *d * 100.0) > 1e-6 || std::fabs(cents) > 9e15) return mismatch();
    return static_cast<int64_t>(cents);
  }
  auto cents = parse_cents(std::get<std::string>(lit));
  if (!cents) return mismatch();
  return *cents;
}

/// A filter bound to a column: a per-dictionary-code mask for text columns,
/// a sorted value set or bounds for integer-backed columns.
struct BoundFilter {
  Source src;
  FilterOp op = FilterOp::Equals;
  std::vector<char> text_mask;
  std::vector<int64_t> set;
  int64_t lo = 0;
  int64_t hi = 0;

  bool passes_numeric(int64_t v) const {
    switch (op) {
      case FilterOp::Equals:
      case FilterOp::In: return std::binary_search(set.begin(), set.end(), v);
      case FilterOp::NotEquals:
      case FilterOp::NotIn: return !std::binary_search(set.begin(), set.end(), v);
      case FilterOp::Gt: return v > lo;
      case FilterOp::Gte: return v >= lo;
      case FilterOp::Lt: return v < lo;
      case FilterOp::Lte: return v <= lo;
      case FilterOp::InDateRange: return v >= lo && v <= hi;
    }
    return false;
  }
};

inline bool text_passes(FilterOp op, const std::string& v, const std::vector<std::string>& values) {
  const auto in = [&] { return std::find(values.begin(), values.end(), v) != values.end(); };
  switch (op) {
    case FilterOp::Equals:
    case FilterOp::In: return in();
    case FilterOp::NotEquals:
    case FilterOp::NotIn: return !in();
    case FilterOp::Gt: return v > values[0];
    case FilterOp::Gte: return v >= values[0];
    case FilterOp::Lt: return v < values[0];
    case FilterOp::Lte: return v <= values[0];
    case FilterOp::InDateRange: return false;
  }
  return false;
}

inline BoundFilter bind_filter(const Filter& f, const cube::CubeSchema& cube,
                               const ssb::Dataset& ds) {
  check_filter_shape(f);
  const cube::Dimension* dim = cube.find_dimension(f.member);
  if (!dim) {
    fail(ErrorKind::NotFound, "filter member '" + f.member + "' is not a dimension of cube " +
                                  cube.name);
  }
  BoundFilter bf;
  bf.src = bind_source(cube, ds, dim->name, dim->column);
  bf.op = f.op;
  const ColumnType type = bf.src.type();
  if (f.op == FilterOp::InDateRange && type != ColumnType::Date) {
    fail(ErrorKind::Type, "inDateRange requires a time member, '" + f.member + "' is not one");
  }
  if (type == ColumnType::Text) {
    std::vector<std::string> values;
    for (const auto& lit : f.values) {
      auto s = std::get_if<std::string>(&lit);
      if (!s) {
        fail(ErrorKind::Type, "filter value '" + literal_display(lit) +
                                  "' does not match the text member '" + f.member + "'");
      }
      values.push_back(*s);
    }
    const auto& dict = bf.src.column->dictionary();
    bf.text_mask.resize(dict.size());
    for (std::size_t code = 0; code < dict.size(); ++code) {
      bf.text_mask[code] = text_passes(f.op, dict[code], values) ? 1 : 0;
    }
    return bf;
  }
  for (const auto& lit : f.values) bf.set.push_back(numeric_payload(lit, type, f.member));
  if (f.op == FilterOp::InDateRange) {
    bf.lo = bf.set[0];
    bf.hi = bf.set[1];
    if (bf.lo > bf.hi) {
      fail(ErrorKind::Validation, "dateRange start is after its end for '" + f.member + "'");
    }
  } else {
    bf.lo = bf.set[0];
  }
  std::sort(bf.set.begin(), bf.set.end());
  return bf;
}

struct GroupColumn {
  Source src;
  std::optional<Granularity> bucket;
  std::vector<uint32_t> codes;   // per selected row
  std::vector<int64_t> decode;   // code -> payload (integer-backed columns)
  std::size_t cardinality = 0;
};

struct MeasureSlot {
  const cube::Measure* measure = nullptr;
  Source src;  // unused for count
};

struct Accumulator {
  int64_t count = 0;
  int64_t sum = 0;
  int64_t min = std::numeric_limits<int64_t>::max();
  int64_t max = std::numeric_limits<int64_t>::min();
};

struct VectorHash {
  std::size_t operator()(const std::vector<uint32_t>& v) const noexcept {
    uint64_t h = 1469598103934665603ull;
    for (uint32_t x : v) h = (h ^ x) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

inline constexpr std::size_t kDenseGroupLimit = std::size_t{1} << 22;

}  // namespace detail

/// Aggregates the fact table of `cube` per distinct combination of the
/// query's dimension values. Filters combine conjunctively; groups without
/// surviving rows are absent. Rows come back sorted by orderBy terms, then
/// ascending over the dimension columns, and are cut to `limit`.
inline ResultTable execute(const Query& q, const cube::CubeSchema& cube, const ssb::Dataset& ds) {
  using namespace detail;
  check_shape(q);
  if (q.cube != cube.name) fail(ErrorKind::NotFound, "unknown cube '" + q.cube + "'");
  const ssb::Table& base = ds.table(cube.base_table);
  JoinCache joins(cube, ds, base);

  ResultTable result;

  // Bind grouping columns: dimensions in query order, then the time bucket.
  std::vector<GroupColumn> groups;
  for (const auto& name : q.dimensions) {
    const cube::Dimension& dim = cube.dimension(name);
    groups.push_back(GroupColumn{bind_source(cube, ds, dim.name, dim.column), std::nullopt, {}, {}, 0});
    result.header.push_back(
        {dim.name, ResultColumn::Role::Dimension, std::string(cube::to_string(dim.kind)), ""});
  }
  std::vector<BoundFilter> filters;
  for (const auto& f : q.filters) filters.push_back(bind_filter(f, cube, ds));
  if (q.time_dimension) {
    const auto& td = *q.time_dimension;
    const cube::Dimension& dim = cube.dimension(td.member);
    if (dim.kind != cube::DimensionKind::Time) {
      fail(ErrorKind::Schema, "timeDimension member '" + td.member + "' is not of kind time");
    }
    groups.push_back(
        GroupColumn{bind_source(cube, ds, dim.name, dim.column), td.granularity, {}, {}, 0});
    result.header.push_back({dim.name + "." + std::string(to_string(td.granularity)),
                             ResultColumn::Role::TimeDimension, "time", ""});
    if (td.date_range) {
      filters.push_back(bind_filter(
          Filter{td.member, FilterOp::InDateRange, {td.date_range->first, td.date_range->second}},
          cube, ds));
    }
  }
  std::vector<MeasureSlot> measures;
  for (const auto& name : q.measures) {
    const cube::Measure& m = cube.measure(name);
    MeasureSlot slot{&m, {}};
    if (m.column) {
      slot.src = bind_source(cube, ds, m.name, *m.column);
      if (slot.src.type() == ColumnType::Text || slot.src.type() == ColumnType::Date) {
        fail(ErrorKind::Schema, "measure '" + m.name + "' is bound to a non-numeric column");
      }
    }
    measures.push_back(slot);
    result.header.push_back({m.name, ResultColumn::Role::Measure,
                             std::string(cube::to_string(m.kind)),
                             m.format == cube::MeasureFormat::Currency ? "currency" : ""});
  }

  // Selection vector after conjunctive filtering.
  std::vector<uint32_t> sel(base.row_count());
  std::iota(sel.begin(), sel.end(), 0u);
  for (const auto& f : filters) {
    std::size_t kept = 0;
    if (f.src.type() == ColumnType::Text) {
      auto codes = f.src.column->codes();
      for (uint32_t r : sel) {
        if (f.text_mask[codes[joins.row(f.src, r)]]) sel[kept++] = r;
      }
    } else {
      auto ints = f.src.column->ints();
      for (uint32_t r : sel) {
        if (f.passes_numeric(ints[joins.row(f.src, r)])) sel[kept++] = r;
      }
    }
    sel.resize(kept);
  }

  // Dense per-column codes over the selected rows.
  for (auto& g : groups) {
    g.codes.resize(sel.size());
    if (g.src.type() == ColumnType::Text) {
      auto codes = g.src.column->codes();
      for (std::size_t i = 0; i < sel.size(); ++i) g.codes[i] = codes[joins.row(g.src, sel[i])];
      g.cardinality = g.src.column->dictionary().size();
    } else {
      auto ints = g.src.column->ints();
      std::unordered_map<int64_t, uint32_t> dense;
      for (std::size_t i = 0; i < sel.size(); ++i) {
        int64_t v = ints[joins.row(g.src, sel[i])];
        if (g.bucket) v = bucket_time(Date{static_cast<int32_t>(v)}, *g.bucket).days;
        auto [it, inserted] = dense.emplace(v, static_cast<uint32_t>(g.decode.size()));
        if (inserted) g.decode.push_back(v);
        g.codes[i] = it->second;
      }
      g.cardinality = g.decode.size();
    }
  }

  // Assign each selected row to a group slot.
  std::size_t slots = 1;
  bool dense_slots = true;
  for (auto& g : groups) {
    g.cardinality = std::max<std::size_t>(g.cardinality, 1);
    if (slots > kDenseGroupLimit / g.cardinality) {
      dense_slots = false;
      break;
    }
    slots *= g.cardinality;
  }
  std::vector<uint32_t> group_of(sel.size());
  std::vector<std::size_t> representative;  // index into sel
  if (dense_slots) {
    std::vector<int32_t> slot_group(slots, -1);
    for (std::size_t i = 0; i < sel.size(); ++i) {
      std::size_t slot = 0;
      for (const auto& g : groups) slot = slot * g.cardinality + g.codes[i];
      if (slot_group[slot] < 0) {
        slot_group[slot] = static_cast<int32_t>(representative.size());
        representative.push_back(i);
      }
      group_of[i] = static_cast<uint32_t>(slot_group[slot]);
    }
  } else {
    std::unordered_map<std::vector<uint32_t>, uint32_t, VectorHash> keyed;
    std::vector<uint32_t> key(groups.size());
    for (std::size_t i = 0; i < sel.size(); ++i) {
      for (std::size_t c = 0; c < groups.size(); ++c) key[c] = groups[c].codes[i];
      auto [it, inserted] = keyed.emplace(key, static_cast<uint32_t>(representative.size()));
      if (inserted) representative.push_back(i);
      group_of[i] = it->second;
    }
  }

  // Aggregate.
  const std::size_t n_groups = representative.size();
  const std::size_t n_measures = measures.size();
  std::vector<Accumulator> acc(n_groups * std::max<std::size_t>(n_measures, 1));
  for (std::size_t m = 0; m < n_measures; ++m) {
    const MeasureSlot& slot = measures[m];
    if (!slot.measure->column) {
      for (std::size_t i = 0; i < sel.size(); ++i) ++acc[group_of[i] * n_measures + m].count;
      continue;
    }
    auto ints = slot.src.column->ints();
    for (std::size_t i = 0; i < sel.size(); ++i) {
      Accumulator& a = acc[group_of[i] * n_measures + m];
      const int64_t v = ints[joins.row(slot.src, sel[i])];
      ++a.count;
      if (__builtin_add_overflow(a.sum, v, &a.sum)) {
        fail(ErrorKind::Internal, "sum overflow in measure '" + slot.measure->name + "'");
      }
      a.min = std::min(a.min, v);
      a.max = std::max(a.max, v);
    }
  }

  // Materialize rows.
  result.rows.reserve(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    Row row;
    row.reserve(groups.size() + n_measures);
    const std::size_t rep = representative[g];
    for (const auto& col : groups) {
      const uint32_t code = col.codes[rep];
      if (col.src.type() == ColumnType::Text) {
        row.push_back(Value::text(col.src.column->dictionary()[code]));
      } else {
        row.push_back(Value::of_column(col.src.type(), col.decode[code]));
      }
    }
    for (std::size_t m = 0; m < n_measures; ++m) {
      const Accumulator& a = acc[g * n_measures + m];
      const cube::Measure& measure = *measures[m].measure;
      const ColumnType type = measure.column ? measures[m].src.type() : ColumnType::Integer;
      switch (measure.kind) {
        case cube::MeasureKind::Count: row.push_back(Value::integer(a.count)); break;
        case cube::MeasureKind::Sum: row.push_back(Value::of_column(type, a.sum)); break;
        case cube::MeasureKind::Min: row.push_back(Value::of_column(type, a.min)); break;
        case cube::MeasureKind::Max: row.push_back(Value::of_column(type, a.max)); break;
        case cube::MeasureKind::Avg: {
          double avg = static_cast<double>(a.sum) / static_cast<double>(a.count);
          if (type == ColumnType::Decimal) avg /= 100.0;
          row.push_back(Value::real(avg));
          break;
        }
      }
    }
    result.rows.push_back(std::move(row));
  }

  // Order: explicit terms first, then every dimension column ascending.
  std::vector<std::pair<std::size_t, bool>> keys;
  for (const auto& term : q.order_by) {
    auto idx = result.column_index(term.column);
    if (!idx) fail(ErrorKind::NotFound, "orderBy column '" + term.column + "' is not in the result");
    keys.emplace_back(*idx, term.descending);
  }
  for (std::size_t c = 0; c < groups.size(); ++c) keys.emplace_back(c, false);
  std::sort(result.rows.begin(), result.rows.end(), [&keys](const Row& a, const Row& b) {
    for (const auto& [c, desc] : keys) {
      const int cmp = compare(a[c], b[c]);
      if (cmp != 0) return desc ? cmp > 0 : cmp < 0;
    }
    return false;
  });
  if (q.limit && result.rows.size() > static_cast<std::size_t>(*q.limit)) {
    result.rows.resize(static_cast<std::size_t>(*q.limit));
  }
  return result;
}

}  // namespace cbi::query
