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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cbi/json_util.hpp"
#include "cbi/value.hpp"

namespace cbi::query {

struct ResultColumn {
  enum class Role { Dimension, TimeDimension, Measure };
  std::string name;
  Role role = Role::Dimension;
  std::string type;    // dimension kind or measure kind
  std::string format;  // "currency" or empty

  friend bool operator==(const ResultColumn&, const ResultColumn&) = default;
};

using Row = std::vector<Value>;

struct ResultTable {
  std::vector<ResultColumn> header;
  std::vector<Row> rows;

  std::optional<std::size_t> column_index(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i].name == name) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const ResultTable&, const ResultTable&) = default;
};

inline std::string_view to_string(ResultColumn::Role r) {
  switch (r) {
    case ResultColumn::Role::Dimension: return "dimension";
    case ResultColumn::Role::TimeDimension: return "timeDimension";
    case ResultColumn::Role::Measure: return "measure";
  }
  return "?";
}

/// Decimals travel as strings with two fractional digits so that sums stay
/// exact on the wire; dates as `YYYY-MM-DD`.
inline Json value_to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Integer: return v.as_int();
    case Value::Kind::Real: return v.as_real();
    case Value::Kind::Text: return v.as_text();
    default: return v.to_display();
  }
}

inline Json result_to_json(const ResultTable& t) {
  Json header = Json::array();
  for (const auto& c : t.header) {
    Json col = Json::object();
    col["name"] = c.name;
    col["role"] = std::string(to_string(c.role));
    col["type"] = c.type;
    if (!c.format.empty()) col["format"] = c.format;
    header.push_back(std::move(col));
  }
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json row = Json::array();
    for (const auto& v : r) row.push_back(value_to_json(v));
    rows.push_back(std::move(row));
  }
  Json doc = Json::object();
  doc["header"] = std::move(header);
  doc["rows"] = std::move(rows);
  return doc;
}

/// Fixed-width text rendering used by the CLI.
inline void print_table(const ResultTable& t, std::ostream& out) {
  std::vector<std::size_t> width(t.header.size());
  for (std::size_t c = 0; c < t.header.size(); ++c) width[c] = t.header[c].name.size();
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : t.rows) {
    auto& line = cells.emplace_back();
    for (std::size_t c = 0; c < r.size(); ++c) {
      line.push_back(r[c].to_display());
      width[c] = std::max(width[c], line.back().size());
    }
  }
  const auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out << " | ";
      out << line[c] << std::string(width[c] - line[c].size(), ' ');
    }
    out << '\n';
  };
  std::vector<std::string> names;
  for (const auto& h : t.header) names.push_back(h.name);
  emit(names);
  for (std::size_t c = 0; c < width.size(); ++c) {
    if (c) out << "-+-";
    out << std::string(width[c], '-');
  }
  out << '\n';
  for (const auto& line : cells) emit(line);
  out << "(" << t.rows.size() << (t.rows.size() == 1 ? " row)\n" : " rows)\n");
}

}  // namespace cbi::query
