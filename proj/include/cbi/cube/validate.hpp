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
#include <vector>

#include "cbi/cube/cube.hpp"
#include "cbi/ssb/table.hpp"

namespace cbi::cube {

/// Where a member's column lives: the base table (join empty) or the
/// dimension table of joins[*join].
struct ColumnBinding {
  const ssb::Table* table = nullptr;
  const ssb::Column* column = nullptr;
  std::optional<std::size_t> join;
};

/// Resolves `ref`, either `column` or `TABLE.column`. Unqualified names are
/// looked up in the base table first, then in joined tables. Returns the
/// failure reason through `why`.
inline std::optional<ColumnBinding> resolve_column(const CubeSchema& cube,
                                                   const ssb::Dataset& ds,
                                                   std::string_view ref,
                                                   std::string* why = nullptr) {
  const auto reject = [&](std::string msg) -> std::optional<ColumnBinding> {
    if (why) *why = std::move(msg);
    return std::nullopt;
  };
  const ssb::Table* base = ds.find_table(cube.base_table);
  if (!base) return reject("base table " + cube.base_table + " does not exist");

  std::string_view table_part;
  std::string_view column_part = ref;
  if (auto dot = ref.find('.'); dot != std::string_view::npos) {
    table_part = ref.substr(0, dot);
    column_part = ref.substr(dot + 1);
  }

  const auto in_join = [&](std::size_t j) -> std::optional<ColumnBinding> {
    const ssb::Table* t = ds.find_table(cube.joins[j].table);
    if (!t) return std::nullopt;
    if (const ssb::Column* c = t->find_column(column_part)) {
      return ColumnBinding{t, c, j};
    }
    return std::nullopt;
  };

  if (!table_part.empty()) {
    if (table_part == cube.base_table) {
      if (const ssb::Column* c = base->find_column(column_part)) {
        return ColumnBinding{base, c, std::nullopt};
      }
      return reject("column " + std::string(ref) + " does not exist");
    }
    for (std::size_t j = 0; j < cube.joins.size(); ++j) {
      if (cube.joins[j].table != table_part) continue;
      if (auto b = in_join(j)) return b;
      return reject("column " + std::string(ref) + " does not exist");
    }
    return reject("table " + std::string(table_part) + " is not joined into cube " +
                  cube.name);
  }

  if (const ssb::Column* c = base->find_column(column_part)) {
    return ColumnBinding{base, c, std::nullopt};
  }
  std::optional<ColumnBinding> found;
  for (std::size_t j = 0; j < cube.joins.size(); ++j) {
    if (auto b = in_join(j)) {
      if (found) {
        return reject("column " + std::string(ref) + " is ambiguous across joined tables");
      }
      found = b;
    }
  }
  if (found) return found;
  return reject("column " + std::string(ref) + " does not exist in " + cube.base_table +
                " or any joined table");
}

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string member;  // empty for cube-level problems
  std::string message;
};

/// Checks every binding of `cube` against `ds`. An empty report means the
/// cube is executable; problems are reported, never thrown.
inline std::vector<Diagnostic> validate_cube(const CubeSchema& cube, const ssb::Dataset& ds) {
  std::vector<Diagnostic> report;
  const auto error = [&](std::string member, std::string message) {
    report.push_back({Diagnostic::Severity::Error, std::move(member), std::move(message)});
  };

  try {
    check_structure(cube);
  } catch (const Error& e) {
    error("", e.what());
  }
  if (cube.data_source != "default") {
    error("", "dataSource '" + cube.data_source + "' is not served; only 'default' is");
  }

  const ssb::Table* base = ds.find_table(cube.base_table);
  if (!base) {
    error("", "base table " + cube.base_table + " does not exist");
    return report;
  }

  for (const auto& j : cube.joins) {
    const ssb::Table* dim = ds.find_table(j.table);
    if (!dim) {
      error("", "joined table " + j.table + " does not exist");
      continue;
    }
    const ssb::Column* fk = base->find_column(j.foreign_key);
    if (!fk) {
      error("", "join key " + cube.base_table + "." + j.foreign_key + " does not exist");
    } else if (fk->type() == ColumnType::Text) {
      error("", "join key " + cube.base_table + "." + j.foreign_key + " must not be text");
    }
    const ssb::Column* pk = dim->find_column(j.primary_key);
    if (!pk) {
      error("", "join key " + j.table + "." + j.primary_key + " does not exist");
    } else if (dim->schema().primary_key != j.primary_key) {
      error("", "join key " + j.table + "." + j.primary_key + " is not the primary key");
    } else if (fk && fk->type() != pk->type()) {
      error("", "join keys " + j.foreign_key + " and " + j.primary_key + " differ in type");
    }
  }

  for (const auto& m : cube.measures) {
    if (!m.column) continue;
    std::string why;
    auto binding = resolve_column(cube, ds, *m.column, &why);
    if (!binding) {
      error(m.name, why);
    } else if (!is_numeric(binding->column->type())) {
      error(m.name, std::string(to_string(m.kind)) + " measure over " + *m.column +
                        " requires a numeric column, found " +
                        std::string(to_string(binding->column->type())));
    }
  }
  for (const auto& d : cube.dimensions) {
    std::string why;
    auto binding = resolve_column(cube, ds, d.column, &why);
    if (!binding) {
      error(d.name, why);
    } else if (!compatible(d.kind, binding->column->type())) {
      error(d.name, std::string(to_string(d.kind)) + " dimension cannot bind " + d.column +
                        " of type " + std::string(to_string(binding->column->type())));
    }
  }
  return report;
}

}  // namespace cbi::cube
