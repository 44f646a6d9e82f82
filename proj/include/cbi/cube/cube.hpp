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

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cbi/error.hpp"
#include "cbi/value.hpp"

namespace cbi::cube {

enum class MeasureKind { Count, Sum, Avg, Min, Max };
enum class DimensionKind { String, Time, Number };
enum class MeasureFormat { None, Currency };

constexpr std::string_view to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::Count: return "count";
    case MeasureKind::Sum: return "sum";
    case MeasureKind::Avg: return "avg";
    case MeasureKind::Min: return "min";
    case MeasureKind::Max: return "max";
  }
  return "?";
}

constexpr std::string_view to_string(DimensionKind k) {
  switch (k) {
    case DimensionKind::String: return "string";
    case DimensionKind::Time: return "time";
    case DimensionKind::Number: return "number";
  }
  return "?";
}

constexpr std::string_view to_string(MeasureFormat f) {
  return f == MeasureFormat::Currency ? "currency" : "none";
}

inline std::optional<MeasureKind> measure_kind_from(std::string_view s) {
  for (auto k : {MeasureKind::Count, MeasureKind::Sum, MeasureKind::Avg,
                 MeasureKind::Min, MeasureKind::Max}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

inline std::optional<DimensionKind> dimension_kind_from(std::string_view s) {
  for (auto k : {DimensionKind::String, DimensionKind::Time, DimensionKind::Number}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

/// Column types a dimension kind may bind to.
constexpr bool compatible(DimensionKind k, ColumnType t) {
  switch (k) {
    case DimensionKind::String: return t == ColumnType::Text;
    case DimensionKind::Time: return t == ColumnType::Date;
    case DimensionKind::Number: return is_numeric(t);
  }
  return false;
}

struct Measure {
  std::string name;
  MeasureKind kind = MeasureKind::Count;
  std::optional<std::string> column;  // absent exactly for count
  MeasureFormat format = MeasureFormat::None;
  std::vector<std::string> drill_members;

  friend bool operator==(const Measure&, const Measure&) = default;
};

struct Dimension {
  std::string name;
  DimensionKind kind = DimensionKind::String;
  std::string column;

  friend bool operator==(const Dimension&, const Dimension&) = default;
};

struct Join {
  std::string table;
  std::string foreign_key;  // column of the base table
  std::string primary_key;  // column of `table`

  friend bool operator==(const Join&, const Join&) = default;
};

struct CubeSchema {
  std::string name;
  std::string base_table;
  std::vector<Join> joins;
  std::vector<Measure> measures;
  std::vector<Dimension> dimensions;
  std::string data_source = "default";

  const Measure* find_measure(std::string_view member) const {
    for (const auto& m : measures) {
      if (m.name == member) return &m;
    }
    return nullptr;
  }
  const Dimension* find_dimension(std::string_view member) const {
    for (const auto& d : dimensions) {
      if (d.name == member) return &d;
    }
    return nullptr;
  }
  const Measure& measure(std::string_view member) const {
    if (const Measure* m = find_measure(member)) return *m;
    fail(ErrorKind::NotFound, "cube " + name + " has no measure '" +
                                  std::string(member) + "'");
  }
  const Dimension& dimension(std::string_view member) const {
    if (const Dimension* d = find_dimension(member)) return *d;
    fail(ErrorKind::NotFound, "cube " + name + " has no dimension '" +
                                  std::string(member) + "'");
  }

  friend bool operator==(const CubeSchema&, const CubeSchema&) = default;
};

/// Structural invariants that hold independently of any dataset. Throws
/// Schema on the first violation.
inline void check_structure(const CubeSchema& cube) {
  if (cube.name.empty()) fail(ErrorKind::Schema, "cube name is empty");
  if (cube.base_table.empty()) fail(ErrorKind::Schema, "baseTable is empty");
  if (cube.measures.empty() && cube.dimensions.empty()) {
    fail(ErrorKind::Schema, "empty cube: no measures and no dimensions");
  }
  std::unordered_set<std::string> names;
  for (const auto& m : cube.measures) {
    if (!names.insert(m.name).second) {
      fail(ErrorKind::Schema, "duplicate member name '" + m.name + "'");
    }
  }
  for (const auto& d : cube.dimensions) {
    if (!names.insert(d.name).second) {
      fail(ErrorKind::Schema, "duplicate member name '" + d.name + "'");
    }
    if (d.column.empty()) {
      fail(ErrorKind::Schema, "dimension '" + d.name + "' has no column");
    }
  }
  for (const auto& m : cube.measures) {
    if (m.name.empty()) fail(ErrorKind::Schema, "measure with empty name");
    if (m.kind == MeasureKind::Count && m.column) {
      fail(ErrorKind::Schema,
           "count measure '" + m.name + "' must not bind a column");
    }
    if (m.kind != MeasureKind::Count && (!m.column || m.column->empty())) {
      fail(ErrorKind::Schema, std::string(to_string(m.kind)) + " measure '" +
                                  m.name + "' requires a column");
    }
    std::unordered_set<std::string> drill;
    for (const auto& dm : m.drill_members) {
      if (!cube.find_dimension(dm)) {
        fail(ErrorKind::Schema, "measure '" + m.name +
                                    "' drills into unknown dimension '" + dm +
                                    "'");
      }
      if (!drill.insert(dm).second) {
        fail(ErrorKind::Schema, "measure '" + m.name +
                                    "' lists drill member '" + dm + "' twice");
      }
    }
  }
  for (const auto& j : cube.joins) {
    if (j.table.empty() || j.foreign_key.empty() || j.primary_key.empty()) {
      fail(ErrorKind::Schema, "join entries need table, foreignKey and primaryKey");
    }
  }
}

}  // namespace cbi::cube
