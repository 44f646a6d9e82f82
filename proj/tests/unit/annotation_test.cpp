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
#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "cbi/collab/annotation.hpp"
#include "cbi/kb/ntriples.hpp"
#include "support/scenario.hpp"

namespace cbi::collab {
namespace {

using kb::iri;
using kb::vocab::cso_term;
using testing::fixture_query;
using testing::kScenarioStart;
using NewAnnotation = AnnotationManager::NewAnnotation;

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

struct AnnotationFixture : ::testing::Test {
  void SetUp() override {
    store.clock = [this] { return now; };
    session = sessions.open_session({testing::jean_profile(), testing::kim_profile()},
                                    VirtualLocation{"Data Summit booth"}, kScenarioStart);
    jean = *sessions.person_by_mbox("jean@cbi.example");
    kim = *sessions.person_by_mbox("kim@cbi.example");
  }

  NewAnnotation note(const std::string& author, Target target, AnnotationKind kind, std::string body) {
    NewAnnotation a;
    a.session = session;
    a.author = author;
    a.target = std::move(target);
    a.kind = kind;
    a.body = std::move(body);
    return a;
  }

  Timestamp now = kScenarioStart;
  CollabStore store;
  SessionHandler sessions{store};
  AnnotationManager ams{store, sessions};
  std::string session, jean, kim;
};

TEST_F(AnnotationFixture, AddThenGetRoundTrips) {
  const Target t = ItemTarget{"urn:cbi:item:1"};
  const auto id = ams.add(note(jean, t, AnnotationKind::Comment, "TRUCK has the largest share."));
  const AnnotationView v = ams.get(id);
  EXPECT_EQ(v.annotation_id, id);
  EXPECT_EQ(v.kind, AnnotationKind::Comment);
  EXPECT_EQ(v.body, "TRUCK has the largest share.");
  EXPECT_EQ(v.author, jean);
  EXPECT_EQ(v.session, session);
  EXPECT_EQ(v.target, t);
  EXPECT_EQ(v.created_at, kScenarioStart);
  EXPECT_EQ(v.modified_at, kScenarioStart);
  EXPECT_FALSE(v.in_reply_to);
  // type, body, author, session, createdAt, modifiedAt, annotates, targetsDashboardItem
  EXPECT_EQ(ams.footprint(id), 8u);
}

TEST_F(AnnotationFixture, QuestionOnQueryTargetIsAQuestionInstance) {
  const auto before = store.kb.instances_of(cso_term("Question"), false).size();
  const Target t = QueryTarget{fixture_query("shipmode_by_priority")};
  const auto id = ams.add(note(kim, t, AnnotationKind::Question,
                               "Do TRUCK and AIR serve different priorities?"));
  EXPECT_EQ(store.kb.instances_of(cso_term("Question"), false).size(), before + 1);
  EXPECT_EQ(ams.get(id).target, t);
  const auto listed = ams.enlist(target_key(t));
  ASSERT_EQ(listed.size(), 1u);
  EXPECT_EQ(listed[0].annotation_id, id);
  // Every subclass instance is an Annotation through the closure.
  const auto all = store.kb.instances_of(cso_term("Annotation"), true);
  EXPECT_NE(std::find(all.begin(), all.end(), iri(id)), all.end());
}

TEST_F(AnnotationFixture, TargetKeysAreStableAndDistinct) {
  const auto q = fixture_query("shipmode_by_priority");
  EXPECT_EQ(target_key(QueryTarget{q}), target_key(QueryTarget{query::parse_query(query::query_to_json(q).dump())}));
  EXPECT_NE(target_key(QueryTarget{q}), target_key(QueryTarget{fixture_query("count_by_priority")}));
  EXPECT_EQ(target_key(CubeTarget{"Lineorder"}), "urn:cbi:cube:Lineorder");
  EXPECT_EQ(target_key(CubeTarget{"My Cube"}), "urn:cbi:cube:My%20Cube");
  EXPECT_EQ(target_key(ItemTarget{"urn:cbi:item:4"}), "urn:cbi:item:4");
  EXPECT_EQ(target_key(QueryTarget{q}).rfind("urn:cbi:query:", 0), 0u);
}

TEST_F(AnnotationFixture, EditByAuthorBumpsModifiedAt) {
  const auto id = ams.add(note(jean, CubeTarget{"Lineorder"}, AnnotationKind::Description, "Counts orders."));
  now = Timestamp{kScenarioStart.seconds + 300};
  const AnnotationView v = ams.edit(id, "Counts orders by mode of shipment.", jean);
  EXPECT_EQ(v.body, "Counts orders by mode of shipment.");
  EXPECT_EQ(v.modified_at, now);
  EXPECT_EQ(v.created_at, kScenarioStart);
  EXPECT_EQ(ams.get(id), v);
  // A clock that has not moved still yields a strictly later modifiedAt.
  const AnnotationView again = ams.edit(id, "Counts orders per shipment mode.", jean);
  EXPECT_EQ(again.modified_at.seconds, now.seconds + 1);
  EXPECT_EQ(ams.footprint(id), 8u);
}

TEST_F(AnnotationFixture, OnlyTheAuthorMayEditOrDelete) {
  const auto id = ams.add(note(jean, ItemTarget{"urn:cbi:item:1"}, AnnotationKind::Comment, "mine"));
  EXPECT_EQ(kind_of([&] { ams.edit(id, "hijacked", kim); }), ErrorKind::Authorization);
  EXPECT_EQ(kind_of([&] { ams.remove(id, kim); }), ErrorKind::Authorization);
  EXPECT_EQ(ams.get(id).body, "mine");
}

TEST_F(AnnotationFixture, DeleteRemovesEveryTriple) {
  const auto keep = ams.add(note(kim, ItemTarget{"urn:cbi:item:1"}, AnnotationKind::Comment, "keep"));
  const auto size_before = store.kb.size();
  const auto id = ams.add(note(jean, ItemTarget{"urn:cbi:item:1"}, AnnotationKind::Comment, "drop"));
  ams.remove(id, jean);
  EXPECT_EQ(store.kb.size(), size_before);
  EXPECT_EQ(ams.footprint(id), 0u);
  EXPECT_EQ(kind_of([&] { ams.get(id); }), ErrorKind::NotFound);
  EXPECT_EQ(kind_of([&] { ams.remove(id, jean); }), ErrorKind::NotFound);
  const auto left = ams.enlist("urn:cbi:item:1");
  ASSERT_EQ(left.size(), 1u);
  EXPECT_EQ(left[0].annotation_id, keep);
}

TEST_F(AnnotationFixture, AnswersLinkToQuestionsAndOrphanOnDelete) {
  const Target t = ItemTarget{"urn:cbi:item:2"};
  const auto q = ams.add(note(kim, t, AnnotationKind::Question, "Is road shipping cheapest?"));
  auto answer = note(jean, t, AnnotationKind::Answer, "It depends on priority.");
  answer.in_reply_to = q;
  now = Timestamp{now.seconds + 10};
  const auto a = ams.add(answer);
  EXPECT_EQ(ams.get(a).in_reply_to, q);

  ams.remove(q, kim);
  const AnnotationView orphan = ams.get(a);
  EXPECT_FALSE(orphan.in_reply_to);
  EXPECT_EQ(orphan.orphaned_from, q);
  EXPECT_TRUE(store.kb.match(std::nullopt, cso_term("inReplyTo"), iri(q)).empty());
}

TEST_F(AnnotationFixture, ReplyRulesAreEnforced) {
  const Target t = ItemTarget{"urn:cbi:item:2"};
  const auto c = ams.add(note(kim, t, AnnotationKind::Comment, "plain comment"));
  auto unlinked = note(jean, t, AnnotationKind::Answer, "an answer to nothing");
  EXPECT_EQ(kind_of([&] { ams.add(unlinked); }), ErrorKind::Validation);
  unlinked.in_reply_to = c;
  EXPECT_EQ(kind_of([&] { ams.add(unlinked); }), ErrorKind::Validation);
  auto comment_reply = note(jean, t, AnnotationKind::Comment, "replying");
  comment_reply.in_reply_to = c;
  EXPECT_EQ(kind_of([&] { ams.add(comment_reply); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([&] { ams.add(note(jean, t, AnnotationKind::Comment, "")); }), ErrorKind::Validation);
}

TEST_F(AnnotationFixture, ClosedSessionRejectsWithStateError) {
  ams.add(note(jean, CubeTarget{"Lineorder"}, AnnotationKind::Comment, "before close"));
  sessions.close_session(session, Timestamp{kScenarioStart.seconds + 60});
  const auto size = store.kb.size();
  EXPECT_EQ(kind_of([&] { ams.add(note(kim, CubeTarget{"Lineorder"}, AnnotationKind::Comment, "too late")); }),
            ErrorKind::State);
  EXPECT_EQ(store.kb.size(), size);
}

TEST_F(AnnotationFixture, NonParticipantIsRejected) {
  const auto outsider_session = sessions.open_session(
      {UserProfile{std::nullopt, "Ada", "ada@cbi.example", std::nullopt, {}}}, VirtualLocation{"elsewhere"},
      kScenarioStart);
  const auto ada = *sessions.person_by_mbox("ada@cbi.example");
  EXPECT_EQ(kind_of([&] { ams.add(note(ada, CubeTarget{"Lineorder"}, AnnotationKind::Comment, "hi")); }),
            ErrorKind::Authorization);
  EXPECT_EQ(kind_of([&] {
              auto a = note(jean, CubeTarget{"Lineorder"}, AnnotationKind::Comment, "x");
              a.session = "urn:cbi:session:404";
              ams.add(a);
            }),
            ErrorKind::NotFound);
  (void)outsider_session;
}

TEST_F(AnnotationFixture, EnlistOrdersByCreatedAtThenIri) {
  const Target t = ItemTarget{"urn:cbi:item:7"};
  // Shuffled clock readings with deliberate ties; twelve annotations push
  // the IRI counter past 9 so ordering must be numeric, not textual.
  std::vector<int64_t> offsets = {30, 10, 10, 20, 0, 30, 10, 0, 20, 20, 0, 10};
  std::vector<std::pair<int64_t, std::string>> expected;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    now = Timestamp{kScenarioStart.seconds + offsets[i]};
    const auto id = ams.add(note(i % 2 ? jean : kim, t, AnnotationKind::Comment, "c" + std::to_string(i)));
    expected.emplace_back(offsets[i], id);
  }
  // Reference order: by offset, ties in insertion order (the minter is
  // monotonic).
  std::stable_sort(expected.begin(), expected.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const auto first = ams.enlist(target_key(t));
  ASSERT_EQ(first.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(first[i].annotation_id, expected[i].second) << i;
  // Stable across calls and across a serialize/parse cycle.
  EXPECT_EQ(ams.enlist(target_key(t)), first);
  CollabStore copy;
  copy.kb = kb::parse_kb(kb::serialize_kb(store.kb));
  SessionHandler copy_sessions(copy);
  AnnotationManager copy_ams(copy, copy_sessions);
  EXPECT_EQ(copy_ams.enlist(target_key(t)), first);
}

TEST_F(AnnotationFixture, EnlistFiltersBySession) {
  const Target t = CubeTarget{"Lineorder"};
  const auto a = ams.add(note(jean, t, AnnotationKind::Comment, "first session"));
  const auto other = sessions.open_session({testing::kim_profile()}, VirtualLocation{"follow-up"}, kScenarioStart);
  auto n = note(kim, t, AnnotationKind::Comment, "second session");
  n.session = other;
  const auto b = ams.add(n);
  EXPECT_EQ(ams.enlist(target_key(t)).size(), 2u);
  ASSERT_EQ(ams.enlist(target_key(t), session).size(), 1u);
  EXPECT_EQ(ams.enlist(target_key(t), session)[0].annotation_id, a);
  EXPECT_EQ(ams.enlist(target_key(t), other)[0].annotation_id, b);
  EXPECT_TRUE(ams.enlist("urn:cbi:item:none").empty());
  EXPECT_TRUE(ams.enlist("not an iri").empty());
}

TEST_F(AnnotationFixture, RandomLifecycleMatchesModel) {
  // Model: map id -> (author, body); random add/edit/delete and the
  // manager must agree after every step.
  std::mt19937_64 rng(11);
  const Target t = ItemTarget{"urn:cbi:item:9"};
  std::map<std::string, std::pair<std::string, std::string>> model;
  for (int step = 0; step < 200; ++step) {
    now = Timestamp{now.seconds + static_cast<int64_t>(rng() % 3)};
    const int op = model.empty() ? 0 : static_cast<int>(rng() % 3);
    if (op == 0) {
      const std::string& who = rng() % 2 ? jean : kim;
      const std::string body = "b" + std::to_string(step);
      model[ams.add(note(who, t, AnnotationKind::Comment, body))] = {who, body};
    } else {
      auto it = model.begin();
      std::advance(it, static_cast<long>(rng() % model.size()));
      if (op == 1) {
        it->second.second = "edited " + std::to_string(step);
        ams.edit(it->first, it->second.second, it->second.first);
      } else {
        ams.remove(it->first, it->second.first);
        model.erase(it);
      }
    }
    const auto listed = ams.enlist(target_key(t));
    ASSERT_EQ(listed.size(), model.size());
    for (const auto& v : listed) {
      ASSERT_TRUE(model.count(v.annotation_id));
      EXPECT_EQ(model[v.annotation_id].first, v.author);
      EXPECT_EQ(model[v.annotation_id].second, v.body);
    }
  }
}

TEST(AnnotationScenario, JeanKimHasSevenAnnotations) {
  testing::Desk desk;
  const auto s = testing::build_jean_kim(desk);
  EXPECT_EQ(s.annotations.size(), 7u);
  EXPECT_EQ(desk.store.kb.instances_of(cso_term("Annotation"), true).size(), 7u);
  EXPECT_EQ(desk.annotations.enlist(s.shipmode_by_priority).size(), 2u);
  EXPECT_EQ(desk.annotations.get(s.answer).in_reply_to, s.question);
  EXPECT_FALSE(desk.sessions.is_open(s.session));
}

}  // namespace
}  // namespace cbi::collab
