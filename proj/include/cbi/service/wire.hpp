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

// JSON bodies of the HTTP routes that have no document format of their own:
// sessions, profiles, locations, annotations and their targets.

#include <optional>
#include <string>
#include <variant>

#include "cbi/collab/annotation.hpp"
#include "cbi/collab/session.hpp"
#include "cbi/cube/cube.hpp"
#include "cbi/dashboard/dashboard.hpp"
#include "cbi/json_util.hpp"

namespace cbi::service::wire {

using namespace json_fields;

inline std::optional<std::string> optional_string(const Json& obj, std::string_view key,
                                                  std::string_view context) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return string_of(*it, std::string(context) + "." + std::string(key));
}

inline collab::UserProfile profile_from_json(const Json& j) {
  object_of(j, "participant");
  reject_unknown(j, {"userId", "displayName", "mbox", "organization", "knows"}, "participant");
  collab::UserProfile p;
  p.user_id = optional_string(j, "userId", "participant");
  p.display_name = string_of(require(j, "displayName", "participant"), "participant.displayName");
  p.mbox = string_of(require(j, "mbox", "participant"), "participant.mbox");
  p.organization = optional_string(j, "organization", "participant");
  if (auto k = j.find("knows"); k != j.end()) {
    for (const auto& v : array_of(*k, "participant.knows")) p.knows.push_back(string_of(v, "knows entry"));
  }
  return p;
}

inline double number_of(const Json& v, std::string_view context) {
  if (!v.is_number()) fail(ErrorKind::Schema, std::string(context) + " must be a number");
  return v.get<double>();
}

/// `{"virtual": label}` or `{"name", "latitude", "longitude"}`.
inline collab::Location location_from_json(const Json& j) {
  object_of(j, "location");
  if (j.contains("virtual")) {
    reject_unknown(j, {"virtual"}, "location");
    return collab::VirtualLocation{string_of(j["virtual"], "location.virtual")};
  }
  reject_unknown(j, {"name", "latitude", "longitude"}, "location");
  return collab::PhysicalLocation{string_of(require(j, "name", "location"), "location.name"),
                                  number_of(require(j, "latitude", "location"), "location.latitude"),
                                  number_of(require(j, "longitude", "location"), "location.longitude")};
}

inline Json location_to_json(const collab::Location& loc) {
  if (const auto* v = std::get_if<collab::VirtualLocation>(&loc)) return Json{{"virtual", v->label}};
  const auto& p = std::get<collab::PhysicalLocation>(loc);
  return Json{{"name", p.name}, {"latitude", p.latitude}, {"longitude", p.longitude}};
}

inline Json session_to_json(const collab::SessionView& s) {
  Json j = Json::object();
  j["id"] = s.session_id;
  j["participants"] = s.participants;
  j["start"] = format_timestamp(s.start);
  if (s.end) j["end"] = format_timestamp(*s.end);
  j["closed"] = s.closed();
  j["location"] = location_to_json(s.location);
  return j;
}

inline std::optional<Timestamp> optional_timestamp(const Json& obj, std::string_view key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return dashboard::timestamp_of(*it, key);
}

/// `{"cube": name}`, `{"item": iri}` or `{"query": document}`.
inline collab::Target target_from_json(const Json& j) {
  object_of(j, "target");
  if (j.size() != 1) fail(ErrorKind::Schema, "target must have exactly one of cube, item, query");
  if (auto c = j.find("cube"); c != j.end()) return collab::CubeTarget{string_of(*c, "target.cube")};
  if (auto i = j.find("item"); i != j.end()) return collab::ItemTarget{string_of(*i, "target.item")};
  if (auto q = j.find("query"); q != j.end()) return collab::QueryTarget{query::query_from_json(*q)};
  fail(ErrorKind::Schema, "target must have exactly one of cube, item, query");
}

inline Json target_to_json(const collab::Target& t) {
  if (const auto* c = std::get_if<collab::CubeTarget>(&t)) return Json{{"cube", c->cube}};
  if (const auto* i = std::get_if<collab::ItemTarget>(&t)) return Json{{"item", i->item}};
  return Json{{"query", query::query_to_json(std::get<collab::QueryTarget>(t).query)}};
}

inline Json annotation_to_json(const collab::AnnotationView& a, const std::string& author_name) {
  Json j = Json::object();
  j["id"] = a.annotation_id;
  j["kind"] = std::string(collab::to_string(a.kind));
  j["body"] = a.body;
  j["author"] = a.author;
  j["authorName"] = author_name;
  j["session"] = a.session;
  j["target"] = target_to_json(a.target);
  j["targetKey"] = collab::target_key(a.target);
  j["createdAt"] = format_timestamp(a.created_at);
  j["modifiedAt"] = format_timestamp(a.modified_at);
  if (a.in_reply_to) j["inReplyTo"] = *a.in_reply_to;
  if (a.orphaned_from) j["orphanedFrom"] = *a.orphaned_from;
  return j;
}

inline collab::AnnotationManager::NewAnnotation new_annotation_from_json(const Json& j) {
  object_of(j, "annotation");
  reject_unknown(j, {"session", "author", "target", "kind", "body", "inReplyTo"}, "annotation");
  collab::AnnotationManager::NewAnnotation a;
  a.session = string_of(require(j, "session", "annotation"), "annotation.session");
  a.author = string_of(require(j, "author", "annotation"), "annotation.author");
  a.target = target_from_json(require(j, "target", "annotation"));
  const std::string kind = string_of(require(j, "kind", "annotation"), "annotation.kind");
  auto k = collab::annotation_kind_from(kind);
  if (!k) fail(ErrorKind::Validation, "unknown annotation kind '" + kind + "'");
  a.kind = *k;
  a.body = string_of(require(j, "body", "annotation"), "annotation.body");
  a.in_reply_to = optional_string(j, "inReplyTo", "annotation");
  return a;
}

inline dashboard::ChartType chart_of(const Json& v) {
  const std::string s = string_of(v, "chartType");
  auto c = dashboard::chart_type_from(s);
  if (!c) fail(ErrorKind::Validation, "unknown chartType '" + s + "'");
  return *c;
}

inline dashboard::NewItem new_item_from_json(const Json& j) {
  object_of(j, "dashboard item");
  reject_unknown(j, {"query", "chartType", "title", "description", "commentRefs"}, "dashboard item");
  dashboard::NewItem n;
  n.query = query::query_from_json(require(j, "query", "dashboard item"));
  n.chart = chart_of(require(j, "chartType", "dashboard item"));
  n.title = string_of(require(j, "title", "dashboard item"), "title");
  n.description = optional_string(j, "description", "dashboard item");
  if (auto r = j.find("commentRefs"); r != j.end()) {
    for (const auto& v : array_of(*r, "commentRefs")) n.comment_refs.push_back(string_of(v, "commentRefs entry"));
  }
  return n;
}

inline dashboard::ItemUpdate item_update_from_json(const Json& j) {
  object_of(j, "dashboard update");
  reject_unknown(j, {"query", "chartType", "title", "description"}, "dashboard update");
  dashboard::ItemUpdate u;
  if (auto q = j.find("query"); q != j.end()) u.query = query::query_from_json(*q);
  if (auto c = j.find("chartType"); c != j.end()) u.chart = chart_of(*c);
  if (auto t = j.find("title"); t != j.end()) u.title = string_of(*t, "title");
  if (auto d = j.find("description"); d != j.end()) {
    u.description = d->is_null() ? std::optional<std::string>() : string_of(*d, "description");
  }
  return u;
}

inline Json members_to_json(const cube::CubeSchema& c) {
  Json measures = Json::array();
  for (const auto& m : c.measures) {
    Json e = Json{{"name", m.name}, {"type", std::string(cube::to_string(m.kind))}};
    if (m.format != cube::MeasureFormat::None) e["format"] = std::string(cube::to_string(m.format));
    e["drillMembers"] = m.drill_members;
    measures.push_back(std::move(e));
  }
  Json dimensions = Json::array();
  for (const auto& d : c.dimensions) {
    dimensions.push_back(Json{{"name", d.name}, {"type", std::string(cube::to_string(d.kind))}});
  }
  return Json{{"cube", c.name}, {"measures", measures}, {"dimensions", dimensions}};
}

}  // namespace cbi::service::wire
