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
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cbi/error.hpp"
#include "cbi/json_util.hpp"
#include "cbi/kb/iri.hpp"
#include "cbi/query/query.hpp"
#include "cbi/time.hpp"

namespace cbi::dashboard {

enum class ChartType { Table, Pie, Bar, Line };

inline std::string_view to_string(ChartType c) {
  switch (c) {
    case ChartType::Table: return "table";
    case ChartType::Pie: return "pie";
    case ChartType::Bar: return "bar";
    case ChartType::Line: return "line";
  }
  return "?";
}

inline std::optional<ChartType> chart_type_from(std::string_view s) {
  if (s == "table") return ChartType::Table;
  if (s == "pie") return ChartType::Pie;
  if (s == "bar") return ChartType::Bar;
  if (s == "line") return ChartType::Line;
  return std::nullopt;
}

/// A pie shows one measure split along one grouping column.
inline void check_chart(ChartType chart, const query::Query& q) {
  if (chart != ChartType::Pie) return;
  const std::size_t groups = q.dimensions.size() + (q.time_dimension ? 1 : 0);
  if (q.measures.size() != 1 || groups != 1) {
    fail(ErrorKind::Validation, "chart constraint: a pie needs exactly 1 measure and 1 dimension, got " +
                                    std::to_string(q.measures.size()) + " and " + std::to_string(groups));
  }
}

struct DashboardItem {
  std::string item_id;
  std::string title;
  std::optional<std::string> description;
  ChartType chart = ChartType::Table;
  query::Query query;
  std::vector<std::string> comment_refs;
  Timestamp created_at;
  Timestamp modified_at;
  int64_t position = 0;  // 1-based

  friend bool operator==(const DashboardItem&, const DashboardItem&) = default;
};

struct NewItem {
  query::Query query;
  ChartType chart = ChartType::Table;
  std::string title;
  std::optional<std::string> description;
  std::vector<std::string> comment_refs;
};

struct ItemUpdate {
  std::optional<query::Query> query;
  std::optional<ChartType> chart;
  std::optional<std::string> title;
  std::optional<std::optional<std::string>> description;
};

/// Throws when a query would not execute. Supplied by whoever owns the
/// cubes and the dataset.
using QueryCheck = std::function<void(const query::Query&)>;

inline constexpr int kDashboardFormatVersion = 1;

inline Json item_to_json(const DashboardItem& item) {
  Json j = Json::object();
  j["id"] = item.item_id;
  j["position"] = item.position;
  j["title"] = item.title;
  if (item.description) j["description"] = *item.description;
  j["chartType"] = std::string(to_string(item.chart));
  j["query"] = query::query_to_json(item.query);
  j["commentRefs"] = item.comment_refs;
  j["createdAt"] = format_timestamp(item.created_at);
  j["modifiedAt"] = format_timestamp(item.modified_at);
  return j;
}

inline Timestamp timestamp_of(const Json& v, std::string_view context) {
  const std::string s = json_fields::string_of(v, context);
  auto t = parse_timestamp(s);
  if (!t) fail(ErrorKind::Schema, std::string(context) + " '" + s + "' is not YYYY-MM-DDTHH:MM:SSZ");
  return *t;
}

inline DashboardItem item_from_json(const Json& j) {
  using namespace json_fields;
  object_of(j, "item");
  reject_unknown(j, {"id", "position", "title", "description", "chartType", "query", "commentRefs",
                     "createdAt", "modifiedAt"},
                 "item");
  DashboardItem item;
  item.item_id = string_of(require(j, "id", "item"), "item id");
  const Json& pos = require(j, "position", "item");
  if (!pos.is_number_integer()) fail(ErrorKind::Schema, "item position must be an integer");
  item.position = pos.get<int64_t>();
  item.title = string_of(require(j, "title", "item"), "item title");
  if (auto d = j.find("description"); d != j.end()) item.description = string_of(*d, "item description");
  const std::string chart = string_of(require(j, "chartType", "item"), "chartType");
  auto c = chart_type_from(chart);
  if (!c) fail(ErrorKind::Schema, "unknown chartType '" + chart + "'");
  item.chart = *c;
  item.query = query::query_from_json(require(j, "query", "item"));
  for (const auto& r : array_of(require(j, "commentRefs", "item"), "commentRefs")) {
    item.comment_refs.push_back(string_of(r, "commentRefs entry"));
  }
  item.created_at = timestamp_of(require(j, "createdAt", "item"), "createdAt");
  item.modified_at = timestamp_of(require(j, "modifiedAt", "item"), "modifiedAt");
  return item;
}

/// Ordered dashboard items. Mutations are exclusive; readers get copies,
/// so a listing or an export never sees a half-applied update.
class Dashboard {
 public:
  Dashboard(kb::IriMinter& minter, QueryCheck check, std::function<Timestamp()> clock = system_now)
      : minter_(minter), check_(std::move(check)), clock_(std::move(clock)) {}

  std::string add_item(const NewItem& n) {
    check_chart(n.chart, n.query);
    run_check(n.query);
    std::unique_lock lock(mutex_);
    DashboardItem item;
    item.item_id = minter_.mint("item").value();
    item.title = n.title;
    item.description = n.description;
    item.chart = n.chart;
    item.query = n.query;
    item.comment_refs = n.comment_refs;
    item.created_at = item.modified_at = clock_();
    item.position = static_cast<int64_t>(items_.size()) + 1;
    items_.push_back(item);
    return item.item_id;
  }

  /// All-or-nothing: a rejected update leaves the item untouched.
  DashboardItem update_item(const std::string& item_id, const ItemUpdate& u) {
    std::unique_lock lock(mutex_);
    auto it = find_locked(item_id);
    DashboardItem next = *it;
    if (u.query) next.query = *u.query;
    if (u.chart) next.chart = *u.chart;
    if (u.title) next.title = *u.title;
    if (u.description) next.description = *u.description;
    check_chart(next.chart, next.query);
    if (u.query) run_check(next.query);
    next.modified_at = Timestamp{std::max(clock_().seconds, it->modified_at.seconds + 1)};
    *it = next;
    return next;
  }

  void delete_item(const std::string& item_id) {
    std::unique_lock lock(mutex_);
    items_.erase(find_locked(item_id));
    for (std::size_t i = 0; i < items_.size(); ++i) items_[i].position = static_cast<int64_t>(i) + 1;
  }

  void add_comment_ref(const std::string& item_id, const std::string& annotation_id) {
    std::unique_lock lock(mutex_);
    auto& refs = find_locked(item_id)->comment_refs;
    if (std::find(refs.begin(), refs.end(), annotation_id) == refs.end()) refs.push_back(annotation_id);
  }

  DashboardItem get(const std::string& item_id) const {
    std::shared_lock lock(mutex_);
    for (const auto& i : items_) {
      if (i.item_id == item_id) return i;
    }
    fail(ErrorKind::NotFound, "unknown dashboard item " + item_id);
  }

  bool contains(const std::string& item_id) const {
    std::shared_lock lock(mutex_);
    return std::any_of(items_.begin(), items_.end(), [&](const auto& i) { return i.item_id == item_id; });
  }

  /// Items in position order.
  std::vector<DashboardItem> items() const {
    std::shared_lock lock(mutex_);
    return items_;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return items_.size();
  }

  void clear() {
    std::unique_lock lock(mutex_);
    items_.clear();
  }

  Json to_json() const {
    Json doc = Json::object();
    doc["formatVersion"] = kDashboardFormatVersion;
    doc["items"] = Json::array();
    for (const auto& i : items()) doc["items"].push_back(item_to_json(i));
    return doc;
  }

  std::string serialize() const { return to_json().dump(2) + "\n"; }

  /// Replaces the contents with a persisted document. Positions are taken
  /// from the document order and minted IRIs are observed.
  void load(const Json& doc) {
    using namespace json_fields;
    object_of(doc, "dashboard");
    reject_unknown(doc, {"formatVersion", "items"}, "dashboard");
    const Json& v = require(doc, "formatVersion", "dashboard");
    if (!v.is_number_integer() || v.get<int64_t>() != kDashboardFormatVersion) {
      fail(ErrorKind::UnsupportedVersion, "dashboard formatVersion " + v.dump() + " is not supported");
    }
    std::vector<DashboardItem> loaded;
    for (const auto& j : array_of(require(doc, "items", "dashboard"), "items")) {
      loaded.push_back(item_from_json(j));
      loaded.back().position = static_cast<int64_t>(loaded.size());
      minter_.observe(loaded.back().item_id);
    }
    std::unique_lock lock(mutex_);
    items_ = std::move(loaded);
  }

 private:
  std::vector<DashboardItem>::iterator find_locked(const std::string& item_id) {
    auto it = std::find_if(items_.begin(), items_.end(),
                           [&](const DashboardItem& i) { return i.item_id == item_id; });
    if (it == items_.end()) fail(ErrorKind::NotFound, "unknown dashboard item " + item_id);
    return it;
  }

  void run_check(const query::Query& q) const {
    try {
      check_(q);
    } catch (const Error& e) {
      fail(ErrorKind::Validation, "query rejected (" + std::string(cbi::to_string(e.kind())) + "): " + e.what());
    }
  }

  kb::IriMinter& minter_;
  QueryCheck check_;
  std::function<Timestamp()> clock_;
  mutable std::shared_mutex mutex_;
  std::vector<DashboardItem> items_;
};

}  // namespace cbi::dashboard
