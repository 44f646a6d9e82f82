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
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cbi/collab/session.hpp"
#include "cbi/collab/store.hpp"
#include "cbi/error.hpp"
#include "cbi/query/query.hpp"

namespace cbi::collab {

enum class AnnotationKind { Comment, Question, Answer, Description };

inline std::string_view to_string(AnnotationKind k) {
  switch (k) {
    case AnnotationKind::Comment: return "comment";
    case AnnotationKind::Question: return "question";
    case AnnotationKind::Answer: return "answer";
    case AnnotationKind::Description: return "description";
  }
  return "?";
}

inline std::optional<AnnotationKind> annotation_kind_from(std::string_view s) {
  if (s == "comment") return AnnotationKind::Comment;
  if (s == "question") return AnnotationKind::Question;
  if (s == "answer") return AnnotationKind::Answer;
  if (s == "description") return AnnotationKind::Description;
  return std::nullopt;
}

/// CSO class local name, e.g. "Question".
inline std::string class_name(AnnotationKind k) {
  std::string s(to_string(k));
  s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct CubeTarget {
  std::string cube;
  friend bool operator==(const CubeTarget&, const CubeTarget&) = default;
};
struct ItemTarget {
  std::string item;
  friend bool operator==(const ItemTarget&, const ItemTarget&) = default;
};
/// Snapshot of a query state; the document is embedded at creation time.
struct QueryTarget {
  query::Query query;
  friend bool operator==(const QueryTarget&, const QueryTarget&) = default;
};
using Target = std::variant<CubeTarget, ItemTarget, QueryTarget>;

namespace detail {

inline std::string percent_encode(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string canonical_query(const query::Query& q) { return query::query_to_json(q).dump(); }

}  // namespace detail

/// The IRI an annotation `annotates`, which is also the key enlist filters
/// on: `urn:cbi:cube:{name}`, the item IRI, or `urn:cbi:query:{hash}` of
/// the canonical query document.
inline std::string target_key(const Target& t) {
  if (const auto* c = std::get_if<CubeTarget>(&t)) return "urn:cbi:cube:" + detail::percent_encode(c->cube);
  if (const auto* i = std::get_if<ItemTarget>(&t)) return i->item;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(
                    detail::fnv1a64(detail::canonical_query(std::get<QueryTarget>(t).query))));
  return std::string("urn:cbi:query:") + hex;
}

struct AnnotationView {
  std::string annotation_id;
  AnnotationKind kind = AnnotationKind::Comment;
  std::string body;
  std::string author;
  std::string session;
  Target target;
  Timestamp created_at;
  Timestamp modified_at;
  std::optional<std::string> in_reply_to;
  std::optional<std::string> orphaned_from;  // set once the question was deleted

  friend bool operator==(const AnnotationView&, const AnnotationView&) = default;
};

/// Orders instance IRIs by prefix, then numerically by trailing counter, so
/// `urn:cbi:annotation:10` follows `urn:cbi:annotation:9`.
inline bool iri_less(std::string_view a, std::string_view b) {
  const auto split = [](std::string_view s) {
    const auto colon = s.rfind(':');
    uint64_t n = 0;
    if (colon != std::string_view::npos) {
      auto tail = s.substr(colon + 1);
      auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), n);
      if (ec == std::errc() && p == tail.data() + tail.size() && !tail.empty()) {
        return std::make_pair(s.substr(0, colon), std::optional<uint64_t>(n));
      }
    }
    return std::make_pair(s, std::optional<uint64_t>());
  };
  const auto [pa, na] = split(a);
  const auto [pb, nb] = split(b);
  if (na && nb && pa == pb) return *na < *nb;
  return a < b;
}

/// Annotation management: add, edit, delete, enlist, on CSO triples.
class AnnotationManager {
 public:
  AnnotationManager(CollabStore& store, const SessionHandler& sessions)
      : store_(store), sessions_(sessions) {}

  struct NewAnnotation {
    std::string session;
    std::string author;
    Target target;
    AnnotationKind kind = AnnotationKind::Comment;
    std::string body;
    std::optional<std::string> in_reply_to;
    /// Import only: keep the original creation time.
    std::optional<Timestamp> created_at;
    /// Import only: an answer whose question did not travel with it.
    bool allow_unlinked_answer = false;
  };

  std::string add(const NewAnnotation& a) {
    using namespace kb::vocab;
    if (a.body.empty()) fail(ErrorKind::Validation, "annotation body is empty");
    if (a.kind == AnnotationKind::Answer && !a.in_reply_to && !a.allow_unlinked_answer) {
      fail(ErrorKind::Validation, "an answer needs inReplyTo naming a question");
    }
    if (a.kind != AnnotationKind::Answer && a.in_reply_to) {
      fail(ErrorKind::Validation, "only answers may carry inReplyTo");
    }
    if (const auto* q = std::get_if<QueryTarget>(&a.target)) query::check_shape(q->query);
    if (const auto* c = std::get_if<CubeTarget>(&a.target); c && c->cube.empty()) {
      fail(ErrorKind::Validation, "cube target names no cube");
    }

    std::lock_guard lock(store_.writer);
    const SessionView session = sessions_.session_info(a.session);
    if (session.closed()) fail(ErrorKind::State, "session " + a.session + " is closed");
    if (!std::binary_search(session.participants.begin(), session.participants.end(), a.author)) {
      fail(ErrorKind::Authorization, a.author + " is not a participant of " + a.session);
    }
    if (a.in_reply_to) {
      const kb::Term q = detail::term_of(*a.in_reply_to, "inReplyTo");
      if (!detail::has_type(store_.kb, q, cso("Question"))) {
        fail(ErrorKind::Validation, "inReplyTo " + *a.in_reply_to + " is not a question");
      }
    }
    const kb::Term item_term = std::holds_alternative<ItemTarget>(a.target)
                                   ? detail::term_of(std::get<ItemTarget>(a.target).item, "item id")
                                   : kb::Term();

    const kb::Term id = store_.minter.mint("annotation");
    const Timestamp now = a.created_at.value_or(store_.clock());
    kb::Batch batch;
    auto& add = batch.add;
    add.push_back({id, type(), cso_term(class_name(a.kind))});
    add.push_back({id, cso_term("hasBody"), kb::Term::text(a.body)});
    add.push_back({id, cso_term("hasAuthor"), kb::iri(a.author)});
    add.push_back({id, cso_term("inSession"), kb::iri(a.session)});
    add.push_back({id, cso_term("createdAt"), kb::Term::date_time(now)});
    add.push_back({id, cso_term("modifiedAt"), kb::Term::date_time(now)});
    add.push_back({id, cso_term("annotates"), kb::iri(target_key(a.target))});
    if (const auto* c = std::get_if<CubeTarget>(&a.target)) {
      add.push_back({id, cso_term("targetsCube"), kb::Term::text(c->cube)});
    } else if (std::holds_alternative<ItemTarget>(a.target)) {
      add.push_back({id, cso_term("targetsDashboardItem"), item_term});
    } else {
      add.push_back({id, cso_term("capturesQuery"),
                     kb::Term::text(detail::canonical_query(std::get<QueryTarget>(a.target).query))});
    }
    if (a.in_reply_to) add.push_back({id, cso_term("inReplyTo"), kb::iri(*a.in_reply_to)});
    store_.kb.apply(batch);
    return id.value();
  }

  /// Replaces the body. modifiedAt moves to the clock, or one second past
  /// its previous value when the clock has not advanced.
  AnnotationView edit(const std::string& annotation_id, const std::string& new_body,
                      const std::string& editor) {
    using namespace kb::vocab;
    if (new_body.empty()) fail(ErrorKind::Validation, "annotation body is empty");
    std::lock_guard lock(store_.writer);
    AnnotationView view = get(annotation_id);
    if (view.author != editor) {
      fail(ErrorKind::Authorization, "only the author may edit " + annotation_id);
    }
    const Timestamp modified{std::max(store_.clock().seconds, view.modified_at.seconds + 1)};
    const kb::Term id = kb::iri(annotation_id);
    store_.kb.apply({{{id, cso_term("hasBody"), kb::Term::text(view.body)},
                      {id, cso_term("modifiedAt"), kb::Term::date_time(view.modified_at)}},
                     {{id, cso_term("hasBody"), kb::Term::text(new_body)},
                      {id, cso_term("modifiedAt"), kb::Term::date_time(modified)}}});
    view.body = new_body;
    view.modified_at = modified;
    return view;
  }

  /// Retracts every triple about the annotation. Answers to a deleted
  /// question trade their inReplyTo link for an orphanedFrom marker.
  void remove(const std::string& annotation_id, const std::string& requester) {
    using namespace kb::vocab;
    std::lock_guard lock(store_.writer);
    const AnnotationView view = get(annotation_id);
    if (view.author != requester) {
      fail(ErrorKind::Authorization, "only the author may delete " + annotation_id);
    }
    const kb::Term id = kb::iri(annotation_id);
    kb::Batch batch;
    batch.retract = store_.kb.match(id, std::nullopt, std::nullopt);
    for (const auto& reply : store_.kb.match(std::nullopt, cso_term("inReplyTo"), id)) {
      batch.retract.push_back(reply);
      batch.add.push_back({reply.subject, cso_term("orphanedFrom"), id});
    }
    store_.kb.apply(batch);
  }

  AnnotationView get(const std::string& annotation_id) const {
    using namespace kb::vocab;
    const kb::KnowledgeBase& kb = store_.kb;
    const kb::Term id = detail::term_of(annotation_id, "annotation id");
    std::optional<AnnotationKind> kind;
    for (const auto& t : kb.objects(id, type())) {
      for (auto k : {AnnotationKind::Comment, AnnotationKind::Question, AnnotationKind::Answer,
                     AnnotationKind::Description}) {
        if (t.value() == cso(class_name(k))) kind = k;
      }
    }
    if (!kind) fail(ErrorKind::NotFound, "unknown annotation " + annotation_id);

    const auto one = [&](std::string_view prop) {
      auto v = kb.object(id, cso_term(prop));
      if (!v) fail(ErrorKind::Internal, "annotation " + annotation_id + " lacks " + std::string(prop));
      return *v;
    };
    AnnotationView view;
    view.annotation_id = annotation_id;
    view.kind = *kind;
    view.body = one("hasBody").value();
    view.author = one("hasAuthor").value();
    view.session = one("inSession").value();
    view.created_at = one("createdAt").as_timestamp();
    view.modified_at = one("modifiedAt").as_timestamp();
    if (auto c = kb.object(id, cso_term("targetsCube"))) {
      view.target = CubeTarget{c->value()};
    } else if (auto i = kb.object(id, cso_term("targetsDashboardItem"))) {
      view.target = ItemTarget{i->value()};
    } else {
      view.target = QueryTarget{query::parse_query(one("capturesQuery").value())};
    }
    if (auto r = kb.object(id, cso_term("inReplyTo"))) view.in_reply_to = r->value();
    if (auto o = kb.object(id, cso_term("orphanedFrom"))) view.orphaned_from = o->value();
    return view;
  }

  /// Annotations on `key` (see target_key), optionally within one session,
  /// ascending by createdAt with ties broken by annotation IRI.
  std::vector<AnnotationView> enlist(const std::string& key,
                                     const std::optional<std::string>& session = std::nullopt) const {
    using namespace kb::vocab;
    std::vector<AnnotationView> out;
    kb::Term key_term;
    try {
      key_term = kb::iri(key);
    } catch (const Error&) {
      return out;
    }
    for (const auto& t : store_.kb.match(std::nullopt, cso_term("annotates"), key_term)) {
      AnnotationView v;
      try {
        v = get(t.subject.value());
      } catch (const Error& e) {
        // Deleted between the match and the read.
        if (e.kind() == ErrorKind::NotFound) continue;
        throw;
      }
      if (session && v.session != *session) continue;
      out.push_back(std::move(v));
    }
    sort_annotations(out);
    return out;
  }

  static void sort_annotations(std::vector<AnnotationView>& v) {
    std::sort(v.begin(), v.end(), [](const AnnotationView& a, const AnnotationView& b) {
      if (a.created_at != b.created_at) return a.created_at < b.created_at;
      return iri_less(a.annotation_id, b.annotation_id);
    });
  }

  /// Number of triples whose subject is the annotation.
  std::size_t footprint(const std::string& annotation_id) const {
    return store_.kb.match(detail::term_of(annotation_id, "annotation id"), std::nullopt, std::nullopt).size();
  }

 private:
  CollabStore& store_;
  const SessionHandler& sessions_;
};

}  // namespace cbi::collab
