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
#include <string_view>

#include "cbi/cube/cube.hpp"
#include "cbi/json_util.hpp"

namespace cbi::cube {

// Cube document (`*.cube.json`). Grammar in docs/formats.md.

inline CubeSchema cube_from_json(const Json& doc) {
  using namespace json_fields;
  object_of(doc, "cube document");
  reject_unknown(doc, {"name", "baseTable", "joins", "measures", "dimensions", "dataSource"},
                 "cube document");

  CubeSchema cube;
  cube.name = string_of(require(doc, "name", "cube document"), "name");
  cube.base_table = string_of(require(doc, "baseTable", "cube document"), "baseTable");
  if (auto it = doc.find("dataSource"); it != doc.end()) {
    cube.data_source = string_of(*it, "dataSource");
  }

  if (auto it = doc.find("joins"); it != doc.end()) {
    for (const auto& j : array_of(*it, "joins")) {
      object_of(j, "join");
      reject_unknown(j, {"table", "foreignKey", "primaryKey"}, "join");
      cube.joins.push_back(Join{string_of(require(j, "table", "join"), "join.table"),
                                string_of(require(j, "foreignKey", "join"), "join.foreignKey"),
                                string_of(require(j, "primaryKey", "join"), "join.primaryKey")});
    }
  }

  const Json& measures = object_of(require(doc, "measures", "cube document"), "measures");
  for (auto it = measures.begin(); it != measures.end(); ++it) {
    const std::string ctx = "measure '" + it.key() + "'";
    const Json& m = object_of(it.value(), ctx);
    reject_unknown(m, {"type", "column", "format", "drillMembers"}, ctx);
    Measure measure;
    measure.name = it.key();
    const std::string type = string_of(require(m, "type", ctx), ctx + ".type");
    auto kind = measure_kind_from(type);
    if (!kind) fail(ErrorKind::Schema, ctx + " has unknown type '" + type + "'");
    measure.kind = *kind;
    if (auto c = m.find("column"); c != m.end()) {
      measure.column = string_of(*c, ctx + ".column");
    }
    if (auto f = m.find("format"); f != m.end()) {
      const std::string format = string_of(*f, ctx + ".format");
      if (format == "currency") {
        measure.format = MeasureFormat::Currency;
      } else if (format != "none") {
        fail(ErrorKind::Schema, ctx + " has unknown format '" + format + "'");
      }
    }
    if (auto d = m.find("drillMembers"); d != m.end()) {
      for (const auto& dm : array_of(*d, ctx + ".drillMembers")) {
        measure.drill_members.push_back(string_of(dm, ctx + ".drillMembers[]"));
      }
    }
    cube.measures.push_back(std::move(measure));
  }

  const Json& dimensions = object_of(require(doc, "dimensions", "cube document"), "dimensions");
  for (auto it = dimensions.begin(); it != dimensions.end(); ++it) {
    const std::string ctx = "dimension '" + it.key() + "'";
    const Json& d = object_of(it.value(), ctx);
    reject_unknown(d, {"type", "column"}, ctx);
    Dimension dim;
    dim.name = it.key();
    const std::string type = string_of(require(d, "type", ctx), ctx + ".type");
    auto kind = dimension_kind_from(type);
    if (!kind) fail(ErrorKind::Schema, ctx + " has unknown type '" + type + "'");
    dim.kind = *kind;
    dim.column = string_of(require(d, "column", ctx), ctx + ".column");
    cube.dimensions.push_back(std::move(dim));
  }

  check_structure(cube);
  return cube;
}

/// Parses a cube document. Syntax errors raise ParseError (line + column);
/// invariant violations raise Schema. Nothing is silently repaired.
inline CubeSchema parse_cube(std::string_view text) {
  Json doc = parse_json(text, "cube");
  return cube_from_json(doc);
}

inline Json cube_to_json(const CubeSchema& cube) {
  Json doc = Json::object();
  doc["name"] = cube.name;
  doc["baseTable"] = cube.base_table;
  doc["joins"] = Json::array();
  for (const auto& j : cube.joins) {
    doc["joins"].push_back(Json{{"table", j.table}, {"foreignKey", j.foreign_key},
                                {"primaryKey", j.primary_key}});
  }
  Json measures = Json::object();
  for (const auto& m : cube.measures) {
    Json entry = Json::object();
    entry["type"] = std::string(to_string(m.kind));
    if (m.column) entry["column"] = *m.column;
    if (m.format != MeasureFormat::None) entry["format"] = std::string(to_string(m.format));
    if (!m.drill_members.empty()) entry["drillMembers"] = m.drill_members;
    measures[m.name] = std::move(entry);
  }
  doc["measures"] = std::move(measures);
  Json dimensions = Json::object();
  for (const auto& d : cube.dimensions) {
    dimensions[d.name] = Json{{"type", std::string(to_string(d.kind))}, {"column", d.column}};
  }
  doc["dimensions"] = std::move(dimensions);
  doc["dataSource"] = cube.data_source;
  return doc;
}

inline std::string serialize_cube(const CubeSchema& cube) {
  return cube_to_json(cube).dump(2) + "\n";
}

}  // namespace cbi::cube
