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
#include <string>
#include <variant>
#include <vector>

#include "cbi/collab/store.hpp"
#include "cbi/error.hpp"
#include "cbi/kb/vocabulary.hpp"

namespace cbi::collab {

struct UserProfile {
  std::optional<std::string> user_id;  // minted when absent
  std::string display_name;
  std::string mbox;
  std::optional<std::string> organization;
  std::vector<std::string> knows;
};

struct PhysicalLocation {
  std::string name;
  double latitude = 0;
  double longitude = 0;
  friend bool operator==(const PhysicalLocation&, const PhysicalLocation&) = default;
};

struct VirtualLocation {
  std::string label;
  friend bool operator==(const VirtualLocation&, const VirtualLocation&) = default;
};

using Location = std::variant<PhysicalLocation, VirtualLocation>;

struct SessionView {
  std::string session_id;
  std::vector<std::string> participants;  // sorted
  Timestamp start;
  std::optional<Timestamp> end;
  Location location;

  bool closed() const noexcept { return end.has_value(); }
  friend bool operator==(const SessionView&, const SessionView&) = default;
};

/// Checks a profile without touching the store.
inline void check_profile(const UserProfile& p) {
  if (p.display_name.empty()) fail(ErrorKind::Validation, "profile displayName is empty");
  const auto at = p.mbox.find('@');
  const bool one_at = at != std::string::npos && p.mbox.find('@', at + 1) == std::string::npos;
  const bool blank = std::any_of(p.mbox.begin(), p.mbox.end(),
                                 [](unsigned char c) { return c <= 0x20 || c == '<' || c == '>'; });
  if (!one_at || at == 0 || at + 1 == p.mbox.size() || blank) {
    fail(ErrorKind::Validation, "mbox '" + p.mbox + "' is not an email address");
  }
}

inline void check_location(const Location& loc) {
  if (const auto* p = std::get_if<PhysicalLocation>(&loc)) {
    if (p->name.empty()) fail(ErrorKind::Validation, "physical location needs a name");
    if (!(p->latitude >= -90 && p->latitude <= 90)) {
      fail(ErrorKind::Validation, "latitude out of range [-90, 90]");
    }
    if (!(p->longitude >= -180 && p->longitude <= 180)) {
      fail(ErrorKind::Validation, "longitude out of range [-180, 180]");
    }
  } else if (std::get<VirtualLocation>(loc).label.empty()) {
    fail(ErrorKind::Validation, "virtual location needs a label");
  }
}

/// User session handler: sessions, participants and their spatiotemporal
/// context, stored as UPO/CSO triples.
class SessionHandler {
 public:
  explicit SessionHandler(CollabStore& store) : store_(store) {}

  std::string open_session(const std::vector<UserProfile>& profiles, const Location& location,
                           Timestamp start) {
    if (profiles.empty()) fail(ErrorKind::InvalidArgument, "a session needs at least one participant");
    for (const auto& p : profiles) check_profile(p);
    check_location(location);

    using namespace kb::vocab;
    std::lock_guard lock(store_.writer);
    kb::Batch batch;
    std::vector<kb::Term> people;
    for (const auto& p : profiles) people.push_back(resolve_person_locked(p, batch));

    const kb::Term session = store_.minter.mint("session");
    const kb::Term interval = store_.minter.mint("interval");
    const kb::Term instant = store_.minter.mint("instant");
    auto& add = batch.add;
    add.push_back({session, type(), cso_term("CollaborativeSession")});
    for (const auto& person : people) add.push_back({session, cso_term("hasParticipant"), person});
    add.push_back({session, cso_term("hasInterval"), interval});
    add.push_back({interval, type(), upo_term("Interval")});
    add.push_back({interval, upo_term("start"), instant});
    add.push_back({instant, type(), upo_term("Instant")});
    add.push_back({instant, upo_term("atTime"), kb::Term::date_time(start)});
    if (const auto* p = std::get_if<PhysicalLocation>(&location)) {
      const kb::Term place = store_.minter.mint("place");
      add.push_back({session, upo_term("locatedIn"), place});
      add.push_back({place, type(), upo_term("Place")});
      add.push_back({place, upo_term("name"), kb::Term::text(p->name)});
      add.push_back({place, upo_term("latitude"), kb::Term::decimal(p->latitude)});
      add.push_back({place, upo_term("longitude"), kb::Term::decimal(p->longitude)});
    } else {
      add.push_back({session, upo_term("virtualLocation"),
                     kb::Term::text(std::get<VirtualLocation>(location).label)});
    }
    store_.kb.apply(batch);
    return session.value();
  }

  SessionView close_session(const std::string& session_id, Timestamp end) {
    using namespace kb::vocab;
    std::lock_guard lock(store_.writer);
    const SessionView view = session_info(session_id);
    if (view.closed()) fail(ErrorKind::State, "session " + session_id + " is already closed");
    if (end < view.start) {
      fail(ErrorKind::Validation, "session end " + format_timestamp(end) + " precedes its start " +
                                      format_timestamp(view.start));
    }
    const kb::Term interval = *store_.kb.object(kb::iri(session_id), cso_term("hasInterval"));
    const kb::Term instant = store_.minter.mint("instant");
    store_.kb.apply({{},
                     {{interval, upo_term("end"), instant},
                      {instant, type(), upo_term("Instant")},
                      {instant, upo_term("atTime"), kb::Term::date_time(end)}}});
    SessionView closed = view;
    closed.end = end;
    return closed;
  }

  SessionView session_info(const std::string& session_id) const {
    using namespace kb::vocab;
    const kb::KnowledgeBase& kb = store_.kb;
    const kb::Term s = detail::term_of(session_id, "session id");
    if (!detail::has_type(kb, s, cso("CollaborativeSession"))) {
      fail(ErrorKind::NotFound, "unknown session " + session_id);
    }
    SessionView view;
    view.session_id = session_id;
    for (const auto& p : kb.objects(s, cso_term("hasParticipant"))) view.participants.push_back(p.value());
    std::sort(view.participants.begin(), view.participants.end());

    const auto interval = kb.object(s, cso_term("hasInterval"));
    if (!interval) fail(ErrorKind::Internal, "session " + session_id + " has no interval");
    const auto instant_time = [&](const kb::Term& instant) {
      return kb.object(instant, upo_term("atTime"))->as_timestamp();
    };
    view.start = instant_time(*kb.object(*interval, upo_term("start")));
    if (auto end = kb.object(*interval, upo_term("end"))) view.end = instant_time(*end);

    if (auto place = kb.object(s, upo_term("locatedIn"))) {
      view.location = PhysicalLocation{kb.object(*place, upo_term("name"))->value(),
                                       kb.object(*place, upo_term("latitude"))->as_decimal(),
                                       kb.object(*place, upo_term("longitude"))->as_decimal()};
    } else {
      view.location = VirtualLocation{kb.object(s, upo_term("virtualLocation"))->value()};
    }
    return view;
  }

  bool is_open(const std::string& session_id) const { return !session_info(session_id).closed(); }

  bool is_participant(const std::string& session_id, const std::string& person) const {
    const auto view = session_info(session_id);
    return std::binary_search(view.participants.begin(), view.participants.end(), person);
  }

  /// displayName of a Person, NotFound otherwise.
  std::string person_name(const std::string& person) const {
    using namespace kb::vocab;
    const kb::Term p = detail::term_of(person, "person id");
    auto name = store_.kb.object(p, upo_term("name"));
    if (!detail::has_type(store_.kb, p, upo("Person")) || !name) {
      fail(ErrorKind::NotFound, "unknown person " + person);
    }
    return name->value();
  }

  /// Person IRI registered under `mbox`, if any.
  std::optional<std::string> person_by_mbox(const std::string& mbox) const {
    using namespace kb::vocab;
    for (const auto& t : store_.kb.match(std::nullopt, upo_term("mbox"), mailto(mbox))) {
      if (detail::has_type(store_.kb, t.subject, upo("Person"))) return t.subject.value();
    }
    return std::nullopt;
  }

 private:
  static kb::Term mailto(const std::string& mbox) { return kb::iri("mailto:" + mbox); }

  // A profile maps to an existing Person by userId, then by mbox; only
  // unseen profiles contribute UPO triples.
  kb::Term resolve_person_locked(const UserProfile& p, kb::Batch& batch) {
    using namespace kb::vocab;
    if (p.user_id) {
      const kb::Term id = detail::term_of(*p.user_id, "userId");
      if (detail::has_type(store_.kb, id, upo("Person")) || pending(batch, id)) return id;
      add_person(id, p, batch);
      return id;
    }
    const kb::Term box = mailto(p.mbox);
    for (const auto& t : batch.add) {
      if (t.predicate == upo_term("mbox") && t.object == box) return t.subject;
    }
    if (auto existing = person_by_mbox(p.mbox)) return kb::iri(*existing);
    const kb::Term id = store_.minter.mint("person");
    add_person(id, p, batch);
    return id;
  }

  static bool pending(const kb::Batch& batch, const kb::Term& id) {
    return std::any_of(batch.add.begin(), batch.add.end(),
                       [&](const kb::Triple& t) { return t.subject == id; });
  }

  static void add_person(const kb::Term& id, const UserProfile& p, kb::Batch& batch) {
    using namespace kb::vocab;
    batch.add.push_back({id, type(), upo_term("Person")});
    batch.add.push_back({id, upo_term("name"), kb::Term::text(p.display_name)});
    batch.add.push_back({id, upo_term("mbox"), mailto(p.mbox)});
    if (p.organization) batch.add.push_back({id, upo_term("organization"), kb::Term::text(*p.organization)});
    for (const auto& other : p.knows) {
      batch.add.push_back({id, upo_term("knows"), detail::term_of(other, "knows entry")});
    }
  }

  CollabStore& store_;
};

}  // namespace cbi::collab
