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
#include <random>
#include <string>
#include <vector>

#include "cbi/cube/cube.hpp"
#include "cbi/cube/validate.hpp"
#include "cbi/query/query.hpp"
#include "cbi/ssb/table.hpp"

namespace cbi::testing {

/// Valid random queries over a cube. Filter literals are sampled from the
/// data so that filters actually bite.
class RandomQueryGenerator {
 public:
  RandomQueryGenerator(const cube::CubeSchema& cube, const ssb::Dataset& ds, uint64_t seed)
      : cube_(cube), ds_(ds), rng_(seed) {}

  const cube::CubeSchema& cube() const noexcept { return cube_; }

  query::Query next(bool allow_order_and_limit = true) {
    query::Query q;
    q.cube = cube_.name;
    for (const auto& m : cube_.measures) {
      if (coin(0.35)) q.measures.push_back(m.name);
    }
    for (const auto& d : cube_.dimensions) {
      if (q.dimensions.size() < 3 && coin(0.18)) q.dimensions.push_back(d.name);
    }
    std::shuffle(q.dimensions.begin(), q.dimensions.end(), rng_);
    if (q.measures.empty() && q.dimensions.empty()) q.measures.push_back(cube_.measures[0].name);

    const int n_filters = static_cast<int>(pick(4));
    for (int i = 0; i < n_filters; ++i) q.filters.push_back(random_filter());

    if (coin(0.25)) {
      std::vector<const cube::Dimension*> times;
      for (const auto& d : cube_.dimensions) {
        if (d.kind == cube::DimensionKind::Time) times.push_back(&d);
      }
      if (!times.empty()) {
        query::TimeDimension td;
        td.member = times[pick(times.size())]->name;
        td.granularity = static_cast<query::Granularity>(pick(3));
        if (coin(0.5)) {
          auto a = sample_value(td.member);
          auto b = sample_value(td.member);
          if (b.to_display() < a.to_display()) std::swap(a, b);
          td.date_range = std::make_pair(a.to_display(), b.to_display());
        }
        q.time_dimension = td;
      }
    }
    if (allow_order_and_limit && coin(0.3)) {
      std::vector<std::string> columns = q.dimensions;
      columns.insert(columns.end(), q.measures.begin(), q.measures.end());
      query::OrderTerm term{columns[pick(columns.size())], coin(0.5)};
      q.order_by.push_back(term);
      if (coin(0.5)) q.limit = static_cast<int64_t>(1 + pick(20));
    }
    return q;
  }

  query::Filter random_filter() {
    return random_filter_on(cube_.dimensions[pick(cube_.dimensions.size())].name);
  }

  query::Filter random_filter_on(const std::string& member) {
    const auto& dim = cube_.dimension(member);
    query::Filter f;
    f.member = dim.name;
    std::vector<query::FilterOp> ops = {query::FilterOp::Equals, query::FilterOp::NotEquals,
                                        query::FilterOp::In,     query::FilterOp::NotIn,
                                        query::FilterOp::Gt,     query::FilterOp::Gte,
                                        query::FilterOp::Lt,     query::FilterOp::Lte};
    if (dim.kind == cube::DimensionKind::Time) ops.push_back(query::FilterOp::InDateRange);
    f.op = ops[pick(ops.size())];
    std::size_t count = 1;
    if (f.op == query::FilterOp::In || f.op == query::FilterOp::NotIn) count = 1 + pick(4);
    if (f.op == query::FilterOp::InDateRange) count = 2;
    std::vector<Value> values;
    for (std::size_t i = 0; i < count; ++i) values.push_back(sample_value(dim.name));
    if (f.op == query::FilterOp::InDateRange && values[1] < values[0]) std::swap(values[0], values[1]);
    for (const auto& v : values) f.values.push_back(to_literal(v));
    return f;
  }

  Value sample_value(const std::string& dimension) {
    const auto& dim = cube_.dimension(dimension);
    auto binding = cube::resolve_column(cube_, ds_, dim.column);
    const std::size_t rows = binding->table->row_count();
    return binding->column->value_at(pick(rows));
  }

  bool coin(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

 private:
  query::Literal to_literal(const Value& v) {
    switch (v.kind()) {
      case Value::Kind::Text:
      case Value::Kind::Date: return v.to_display();
      case Value::Kind::Integer:
        return coin(0.5) ? query::Literal(v.as_int()) : query::Literal(v.to_display());
      case Value::Kind::Decimal:
        return coin(0.5) ? query::Literal(v.to_display())
                         : query::Literal(static_cast<double>(v.as_int()) / 100.0);
      case Value::Kind::Real: return v.as_real();
    }
    return v.to_display();
  }


  const cube::CubeSchema& cube_;
  const ssb::Dataset& ds_;
  std::mt19937_64 rng_;
};

}  // namespace cbi::testing
