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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cbi/collab/annotation.hpp"
#include "cbi/collab/session.hpp"
#include "cbi/dashboard/dashboard.hpp"
#include "cbi/dashboard/query_text.hpp"
#include "cbi/error.hpp"
#include "cbi/json_util.hpp"

namespace cbi::dashboard {

inline constexpr int kExportFormatVersion = 1;

struct ExportComment {
  collab::AnnotationKind kind = collab::AnnotationKind::Comment;
  std::string body;
  std::string author_name;
  Timestamp created_at;
  /// Index of the answered question within the same item's comments.
  std::optional<std::size_t> in_reply_to;

  friend bool operator==(const ExportComment&, const ExportComment&) = default;
};

struct ExportItem {
  int64_t position = 0;
  std::string title;
  std::optional<std::string> description;
  ChartType chart = ChartType::Table;
  query::Query query;
  std::string query_text;
  std::vector<ExportComment> comments;

  friend bool operator==(const ExportItem&, const ExportItem&) = default;
};

struct ExportDocument {
  int format_version = kExportFormatVersion;
  Timestamp exported_at;
  std::vector<ExportItem> items;
};

/// Equal up to exportedAt.
inline bool semantically_equal(const ExportDocument& a, const ExportDocument& b) {
  return a.format_version == b.format_version && a.items == b.items;
}

inline Json export_to_json(const ExportDocument& doc) {
  Json out = Json::object();
  out["formatVersion"] = doc.format_version;
  out["exportedAt"] = format_timestamp(doc.exported_at);
  out["items"] = Json::array();
  for (const auto& item : doc.items) {
    Json meta = Json::object();
    meta["title"] = item.title;
    if (item.description) meta["description"] = *item.description;
    meta["chartType"] = std::string(to_string(item.chart));
    Json comments = Json::array();
    for (const auto& c : item.comments) {
      Json e = Json::object();
      e["kind"] = std::string(collab::to_string(c.kind));
      e["body"] = c.body;
      e["authorName"] = c.author_name;
      e["createdAt"] = format_timestamp(c.created_at);
      if (c.in_reply_to) e["inReplyTo"] = *c.in_reply_to;
      comments.push_back(std::move(e));
    }
    Json j = Json::object();
    j["position"] = item.position;
    j["metadata"] = std::move(meta);
    j["queryDocument"] = query::query_to_json(item.query);
    j["queryText"] = item.query_text;
    j["comments"] = std::move(comments);
    out["items"].push_back(std::move(j));
  }
  return out;
}

inline std::string serialize_export(const ExportDocument& doc) { return export_to_json(doc).dump(2) + "\n"; }

/// Strict reader. The version is checked before anything else; problems
/// inside an item raise Import naming the item index.
inline ExportDocument export_from_json(const Json& j) {
  using namespace json_fields;
  object_of(j, "export document");
  const Json& version = require(j, "formatVersion", "export document");
  if (!version.is_number_integer()) fail(ErrorKind::Schema, "formatVersion must be an integer");
  if (version.get<int64_t>() != kExportFormatVersion) {
    fail(ErrorKind::UnsupportedVersion, "export formatVersion " + version.dump() +
                                            " is not supported (expected " +
                                            std::to_string(kExportFormatVersion) + ")");
  }
  reject_unknown(j, {"formatVersion", "exportedAt", "items"}, "export document");
  ExportDocument doc;
  doc.exported_at = timestamp_of(require(j, "exportedAt", "export document"), "exportedAt");
  const Json& items = array_of(require(j, "items", "export document"), "items");
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      const Json& e = object_of(items[i], "item");
      reject_unknown(e, {"position", "metadata", "queryDocument", "queryText", "comments"}, "item");
      ExportItem item;
      const Json& pos = require(e, "position", "item");
      if (!pos.is_number_integer()) fail(ErrorKind::Schema, "position must be an integer");
      item.position = pos.get<int64_t>();
      const Json& meta = object_of(require(e, "metadata", "item"), "metadata");
      reject_unknown(meta, {"title", "description", "chartType"}, "metadata");
      item.title = string_of(require(meta, "title", "metadata"), "title");
      if (auto d = meta.find("description"); d != meta.end()) item.description = string_of(*d, "description");
      const std::string chart = string_of(require(meta, "chartType", "metadata"), "chartType");
      auto c = chart_type_from(chart);
      if (!c) fail(ErrorKind::Schema, "unknown chartType '" + chart + "'");
      item.chart = *c;
      item.query = query::query_from_json(require(e, "queryDocument", "item"));
      item.query_text = string_of(require(e, "queryText", "item"), "queryText");
      const Json& comments = array_of(require(e, "comments", "item"), "comments");
      for (std::size_t k = 0; k < comments.size(); ++k) {
        const Json& cj = object_of(comments[k], "comment");
        reject_unknown(cj, {"kind", "body", "authorName", "createdAt", "inReplyTo"}, "comment");
        ExportComment c;
        const std::string kind = string_of(require(cj, "kind", "comment"), "kind");
        auto parsed = collab::annotation_kind_from(kind);
        if (!parsed) fail(ErrorKind::Schema, "unknown comment kind '" + kind + "'");
        c.kind = *parsed;
        c.body = string_of(require(cj, "body", "comment"), "body");
        c.author_name = string_of(require(cj, "authorName", "comment"), "authorName");
        c.created_at = timestamp_of(require(cj, "createdAt", "comment"), "createdAt");
        if (auto r = cj.find("inReplyTo"); r != cj.end()) {
          if (!r->is_number_unsigned()) fail(ErrorKind::Schema, "inReplyTo must be a comment index");
          const auto target = r->get<std::size_t>();
          if (c.kind != collab::AnnotationKind::Answer || target >= k ||
              item.comments[target].kind != collab::AnnotationKind::Question) {
            fail(ErrorKind::Schema, "comment " + std::to_string(k) +
                                        ": inReplyTo must index an earlier question");
          }
          c.in_reply_to = target;
        }
        item.comments.push_back(std::move(c));
      }
      doc.items.push_back(std::move(item));
    } catch (const Error& err) {
      fail(ErrorKind::Import, "items[" + std::to_string(i) + "]: " + err.what());
    }
  }
  return doc;
}

inline ExportDocument parse_export(std::string_view text) {
  return export_from_json(parse_json(text, "export"));
}

/// Comments of an item: its commentRefs plus annotations targeting it,
/// without duplicates, ordered like enlist.
inline std::vector<collab::AnnotationView> item_comments(const DashboardItem& item,
                                                         const collab::AnnotationManager& ams) {
  std::vector<collab::AnnotationView> out = ams.enlist(item.item_id);
  std::set<std::string> seen;
  for (const auto& a : out) seen.insert(a.annotation_id);
  for (const auto& ref : item.comment_refs) {
    if (seen.count(ref)) continue;
    try {
      out.push_back(ams.get(ref));
      seen.insert(ref);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotFound) throw;  // deleted since it was attached
    }
  }
  collab::AnnotationManager::sort_annotations(out);
  return out;
}

inline ExportDocument export_dashboard(const Dashboard& dash, const collab::AnnotationManager& ams,
                                       const collab::SessionHandler& sessions, Timestamp now) {
  ExportDocument doc;
  doc.exported_at = now;
  for (const auto& item : dash.items()) {
    ExportItem e;
    e.position = item.position;
    e.title = item.title;
    e.description = item.description;
    e.chart = item.chart;
    e.query = item.query;
    e.query_text = render_query_text(item.query);
    const auto comments = item_comments(item, ams);
    std::map<std::string, std::size_t> index;
    for (const auto& a : comments) {
      ExportComment c;
      c.kind = a.kind;
      c.body = a.body;
      c.author_name = sessions.person_name(a.author);
      c.created_at = a.created_at;
      if (a.in_reply_to) {
        if (auto it = index.find(*a.in_reply_to); it != index.end()) c.in_reply_to = it->second;
      }
      index[a.annotation_id] = e.comments.size();
      e.comments.push_back(std::move(c));
    }
    doc.items.push_back(std::move(e));
  }
  return doc;
}

namespace detail {

// Stable synthetic mailbox for an imported author name.
inline std::string imported_mbox(const std::string& name) {
  std::string slug;
  for (unsigned char c : name) {
    if (std::isalnum(c)) {
      slug += static_cast<char>(std::tolower(c));
    } else if (!slug.empty() && slug.back() != '-') {
      slug += '-';
    }
  }
  while (!slug.empty() && slug.back() == '-') slug.pop_back();
  if (slug.empty()) slug = "user";
  char hex[9];
  std::snprintf(hex, sizeof hex, "%08x", static_cast<unsigned>(collab::detail::fnv1a64(name) & 0xffffffffu));
  return slug + "-" + hex + "@imported.invalid";
}

}  // namespace detail

/// Appends the document's items to the dashboard, in order. Comments are
/// recreated on the new items inside a dedicated "imported" session that
/// is closed afterwards; authors become Persons keyed by name. The whole
/// document is validated before anything is written.
inline std::vector<std::string> import_dashboard(const ExportDocument& doc, Dashboard& dash,
                                                 collab::SessionHandler& sessions,
                                                 collab::AnnotationManager& ams, const QueryCheck& check,
                                                 Timestamp now) {
  if (doc.format_version != kExportFormatVersion) {
    fail(ErrorKind::UnsupportedVersion, "export formatVersion " + std::to_string(doc.format_version) +
                                            " is not supported");
  }
  std::vector<collab::UserProfile> authors;
  std::map<std::string, std::size_t> author_index;
  for (std::size_t i = 0; i < doc.items.size(); ++i) {
    const ExportItem& item = doc.items[i];
    try {
      check_chart(item.chart, item.query);
      check(item.query);
      for (const auto& c : item.comments) {
        if (c.body.empty()) fail(ErrorKind::Validation, "comment body is empty");
        if (c.author_name.empty()) fail(ErrorKind::Validation, "comment authorName is empty");
        if (author_index.emplace(c.author_name, authors.size()).second) {
          authors.push_back({std::nullopt, c.author_name, detail::imported_mbox(c.author_name), std::nullopt, {}});
        }
      }
    } catch (const Error& e) {
      fail(ErrorKind::Import, "items[" + std::to_string(i) + "]: " + e.what());
    }
  }

  std::optional<std::string> session;
  if (!authors.empty()) session = sessions.open_session(authors, collab::VirtualLocation{"imported"}, now);
  std::vector<std::string> people;
  for (const auto& a : authors) people.push_back(*sessions.person_by_mbox(a.mbox));

  std::vector<std::string> ids;
  for (const auto& item : doc.items) {
    const std::string id = dash.add_item({item.query, item.chart, item.title, item.description, {}});
    ids.push_back(id);
    std::vector<std::string> created;
    for (const auto& c : item.comments) {
      collab::AnnotationManager::NewAnnotation a;
      a.session = *session;
      a.author = people[author_index.at(c.author_name)];
      a.target = collab::ItemTarget{id};
      a.kind = c.kind;
      a.body = c.body;
      if (c.in_reply_to) a.in_reply_to = created.at(*c.in_reply_to);
      a.created_at = c.created_at;
      a.allow_unlinked_answer = true;
      created.push_back(ams.add(a));
    }
  }
  if (session) sessions.close_session(*session, now);
  return ids;
}

}  // namespace cbi::dashboard
