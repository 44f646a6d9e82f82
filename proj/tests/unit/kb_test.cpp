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
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cbi/kb/iri.hpp"
#include "cbi/kb/ntriples.hpp"
#include "cbi/kb/store.hpp"
#include "cbi/kb/term.hpp"
#include "cbi/kb/vocabulary.hpp"
#include "support/kb_oracle.hpp"
#include "support/scenario.hpp"

namespace cbi::kb {

// Readable gtest failure output.
inline void PrintTo(const Triple& t, std::ostream* os) { *os << render(t); }

namespace {

using vocab::cso;
using vocab::cso_term;
using vocab::type;
using vocab::upo;
using vocab::upo_term;

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

Triple name_of(const std::string& subject, const std::string& name) {
  return {iri(subject), upo_term("name"), Term::text(name)};
}

TEST(KbTerm, IriValidation) {
  EXPECT_NO_THROW(iri("urn:cbi:person:1"));
  EXPECT_NO_THROW(iri("mailto:jean@cbi.example"));
  EXPECT_EQ(kind_of([] { iri("no scheme"); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { iri("urn:cbi:has space"); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { iri("urn:cbi:<x>"); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { iri(""); }), ErrorKind::Validation);
}

TEST(KbTerm, TypedLiterals) {
  EXPECT_EQ(Term::integer(-17).as_integer(), -17);
  EXPECT_EQ(Term::date_time(Timestamp{86400}).value(), "1970-01-02T00:00:00Z");
  EXPECT_EQ(Term::date_time(Timestamp{86400}).as_timestamp(), Timestamp{86400});
  EXPECT_EQ(Term::decimal(48.8566).value(), "48.8566");
  EXPECT_EQ(Term::decimal(-3).value(), "-3.0");
  EXPECT_DOUBLE_EQ(Term::decimal(2.3522).as_decimal(), 2.3522);
  auto [lat, lon] = Term::geo(40.7128, -74.006).as_geo();
  EXPECT_DOUBLE_EQ(lat, 40.7128);
  EXPECT_DOUBLE_EQ(lon, -74.006);
  EXPECT_EQ(kind_of([] { Term::literal(LiteralType::Integer, "12a"); }), ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { Term::literal(LiteralType::DateTime, "2025-13-01T00:00:00Z"); }),
            ErrorKind::Validation);
  EXPECT_EQ(kind_of([] { Term::text("x").as_integer(); }), ErrorKind::Type);
}

TEST(KbTerm, RenderEscapes) {
  EXPECT_EQ(render(Term::text("a\"b\\c\nd\te")), "\"a\\\"b\\\\c\\nd\\te\"");
  EXPECT_EQ(render(Term::integer(5)), "\"5\"^^<http://www.w3.org/2001/XMLSchema#integer>");
  EXPECT_EQ(render(iri("urn:cbi:x:1")), "<urn:cbi:x:1>");
}

TEST(KbVocabulary, AnnotationClosure) {
  const auto& v = Vocabulary::cbiont();
  const auto c = v.closure(cso("Annotation"));
  EXPECT_EQ(c, (std::set<std::string>{cso("Annotation"), cso("Comment"), cso("Question"), cso("Answer"),
                                      cso("Description")}));
  EXPECT_TRUE(v.is_subclass_of(cso("Question"), cso("Annotation")));
  EXPECT_FALSE(v.is_subclass_of(cso("Annotation"), cso("Question")));
  EXPECT_TRUE(v.is_class(upo("Person")));
  EXPECT_TRUE(v.is_property(cso("hasParticipant")));
  EXPECT_FALSE(v.is_property(upo("Person")));
}

TEST(KbVocabulary, RejectsUndeclaredSuperclass) {
  Vocabulary v;
  v.add_class("urn:x:A");
  EXPECT_EQ(kind_of([&] { v.add_class("urn:x:B", {"urn:x:C"}); }), ErrorKind::Schema);
  EXPECT_EQ(kind_of([&] { v.add_class("urn:x:A"); }), ErrorKind::Schema);
}

TEST(KbStore, AssertThenMatchName) {
  KnowledgeBase kb;
  EXPECT_TRUE(kb.assert_triple(name_of("urn:cbi:person:1", "Jean")));
  const auto hits = kb.match(iri("urn:cbi:person:1"), upo_term("name"), std::nullopt);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].object, Term::text("Jean"));
}

TEST(KbStore, AssertIsIdempotent) {
  KnowledgeBase kb;
  const Triple t = name_of("urn:cbi:person:1", "Jean");
  EXPECT_TRUE(kb.assert_triple(t));
  const auto before = kb.triples();
  EXPECT_FALSE(kb.assert_triple(t));
  EXPECT_EQ(kb.size(), 1u);
  EXPECT_EQ(kb.triples(), before);
}

TEST(KbStore, RetractAbsentIsNoOp) {
  KnowledgeBase kb;
  kb.assert_triple(name_of("urn:cbi:person:1", "Jean"));
  EXPECT_FALSE(kb.retract_triple(name_of("urn:cbi:person:1", "Kim")));
  EXPECT_EQ(kb.size(), 1u);
  EXPECT_TRUE(kb.retract_triple(name_of("urn:cbi:person:1", "Jean")));
  EXPECT_EQ(kb.size(), 0u);
  EXPECT_TRUE(kb.match(Pattern{}).empty());
}

TEST(KbStore, ValidationRejectsUnknownTerms) {
  KnowledgeBase kb;
  EXPECT_EQ(kind_of([&] { kb.assert_triple({iri("urn:cbi:x:1"), iri("urn:cbi:nope"), Term::text("v")}); }),
            ErrorKind::Validation);
  EXPECT_EQ(kind_of([&] { kb.assert_triple({iri("urn:cbi:x:1"), type(), iri(cso("Nonsense"))}); }),
            ErrorKind::Validation);
  EXPECT_EQ(kind_of([&] { kb.assert_triple({Term::text("s"), upo_term("name"), Term::text("v")}); }),
            ErrorKind::Validation);
  EXPECT_EQ(kb.size(), 0u);
}

TEST(KbStore, BatchIsAllOrNothing) {
  KnowledgeBase kb;
  kb.assert_triple(name_of("urn:cbi:person:1", "Jean"));
  Batch bad{{name_of("urn:cbi:person:1", "Jean")},
            {name_of("urn:cbi:person:2", "Kim"), {iri("urn:cbi:x:1"), iri("urn:cbi:bogus"), Term::text("v")}}};
  EXPECT_THROW(kb.apply(bad), Error);
  EXPECT_EQ(kb.size(), 1u);
  EXPECT_TRUE(kb.contains(name_of("urn:cbi:person:1", "Jean")));
}

TEST(KbStore, InstancesOfUnknownClassIsNotFound) {
  KnowledgeBase kb;
  EXPECT_EQ(kind_of([&] { kb.instances_of(iri(cso("Nonsense")), true); }), ErrorKind::NotFound);
}

TEST(KbStore, MatchAgreesWithLinearScan) {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    testing::RandomStore gen(seed);
    KnowledgeBase kb;
    std::vector<Triple> inserted;
    const std::size_t n = 150 + 170 * seed;  // up to 1,170 attempts, <= 1,000 distinct kept
    for (std::size_t i = 0; i < n && kb.size() < 1000; ++i) {
      Triple t = gen.triple();
      kb.assert_triple(t);
      inserted.push_back(t);
    }
    // Retract a few so the indexes see deletions too.
    for (std::size_t i = 0; i < 30; ++i) {
      const Triple victim = inserted[gen.pick(inserted.size())];
      kb.retract_triple(victim);
      inserted.erase(std::remove(inserted.begin(), inserted.end(), victim), inserted.end());
    }
    ASSERT_LE(kb.size(), 1000u);
    for (int q = 0; q < 120; ++q) {
      const Triple probe = gen.triple();
      Pattern p;
      if (gen.pick(2)) p.subject = probe.subject;
      if (gen.pick(2)) p.predicate = probe.predicate;
      if (gen.pick(2)) p.object = probe.object;
      ASSERT_EQ(kb.match(p), testing::naive_match(inserted, p)) << "seed " << seed << " probe " << q;
    }
    EXPECT_EQ(kb.match(Pattern{}), testing::naive_match(inserted, Pattern{}));
  }
}

TEST(KbStore, TransitiveInstancesAreUnionOfSubclasses) {
  testing::Desk desk;
  testing::build_jean_kim(desk);
  const KnowledgeBase& kb = desk.store.kb;
  std::vector<Term> expected;
  for (const auto* c : {"Comment", "Question", "Answer", "Description"}) {
    for (const auto& t : kb.instances_of(iri(cso(c)), false)) expected.push_back(t);
  }
  std::sort(expected.begin(), expected.end(), [](const Term& a, const Term& b) { return render(a) < render(b); });
  EXPECT_EQ(kb.instances_of(iri(cso("Annotation")), true), expected);
  EXPECT_EQ(expected.size(), 7u);
  EXPECT_TRUE(kb.instances_of(iri(cso("Annotation")), false).empty());
}

TEST(KbStore, JeanKimHasTwoPersons) {
  testing::Desk desk;
  testing::build_jean_kim(desk);
  EXPECT_EQ(desk.store.kb.instances_of(upo_term("Person"), false).size(), 2u);
  EXPECT_EQ(desk.store.kb.instances_of(cso_term("CollaborativeSession"), false).size(), 1u);
}

TEST(KbNTriples, RoundTripJeanKim) {
  testing::Desk desk;
  testing::build_jean_kim(desk);
  const KnowledgeBase& kb = desk.store.kb;
  const std::string text = serialize_kb(kb);
  const KnowledgeBase back = parse_kb(text);
  EXPECT_EQ(back, kb);
  EXPECT_EQ(serialize_kb(back), text);
}

TEST(KbNTriples, EscapedLiteralsRoundTrip) {
  KnowledgeBase kb;
  kb.assert_triple(name_of("urn:cbi:person:1", "line\none \"quoted\" back\\slash\ttab"));
  kb.assert_triple(name_of("urn:cbi:person:2", "caf\xC3\xA9"));
  EXPECT_EQ(parse_kb(serialize_kb(kb)), kb);
}

TEST(KbNTriples, UnicodeEscapes) {
  const auto kb = parse_kb("<urn:cbi:p:1> <" + upo("name") + "> \"caf\\u00E9 \\U0001F600\" .\n");
  const auto hits = kb.match(iri("urn:cbi:p:1"), std::nullopt, std::nullopt);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].object.value(), "caf\xC3\xA9 \xF0\x9F\x98\x80");
}

TEST(KbNTriples, CommentsAndBlankLinesAreSkipped) {
  const auto kb = parse_kb("# header\n\n  \n<urn:cbi:p:1> <" + upo("name") + "> \"Jean\" .\n");
  EXPECT_EQ(kb.size(), 1u);
}

TEST(KbNTriples, ErrorsCarryLineNumbers) {
  std::string good;
  for (int i = 1; i <= 6; ++i) good += "<urn:cbi:p:" + std::to_string(i) + "> <" + upo("name") + "> \"n\" .\n";
  const std::vector<std::string> bad_lines = {
      "<urn:cbi:p:7> <" + upo("name") + "> \"unterminated .",
      "<urn:cbi:p:7> <" + upo("name") + "> \"x\"",
      "<urn:cbi:p:7> <" + upo("name") + "> \"x\"@en .",
      "<urn:cbi:p:7> <urn:cbi:unknown> \"x\" .",
      "<urn:cbi:p:7> <" + vocab::rdf("type") + "> <" + cso("Nope") + "> .",
      "<urn:cbi:p:7> <" + upo("name") + "> \"x\"^^<http://example.org/dt> .",
      "<urn:cbi:p:7> <" + upo("name") + "> \"x\" . trailing",
      "\"lit\" <" + upo("name") + "> \"x\" .",
  };
  for (const auto& bad : bad_lines) {
    try {
      parse_kb(good + bad + "\n" + good);
      ADD_FAILURE() << "accepted: " << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 7u) << bad;
    }
  }
}

TEST(KbNTriples, FailedParseLeavesStoreUntouched) {
  KnowledgeBase kb;
  kb.assert_triple(name_of("urn:cbi:person:9", "Existing"));
  std::istringstream in("<urn:cbi:p:1> <" + upo("name") + "> \"ok\" .\nbroken\n");
  EXPECT_THROW(parse_kb_into(in, kb), ParseError);
  EXPECT_EQ(kb.size(), 1u);
}

TEST(KbIri, MinterCountsPerKindAndObserves) {
  IriMinter m;
  EXPECT_EQ(m.mint("person").value(), "urn:cbi:person:1");
  EXPECT_EQ(m.mint("person").value(), "urn:cbi:person:2");
  EXPECT_EQ(m.mint("session").value(), "urn:cbi:session:1");
  m.observe("urn:cbi:person:40");
  m.observe("urn:cbi:annotation:x");  // not numeric, ignored
  EXPECT_EQ(m.mint("person").value(), "urn:cbi:person:41");
  EXPECT_EQ(m.mint("annotation").value(), "urn:cbi:annotation:1");
}

TEST(KbIri, ObservingAStoreAvoidsCollisions) {
  testing::Desk desk;
  const auto s = testing::build_jean_kim(desk);
  const KnowledgeBase copy = parse_kb(serialize_kb(desk.store.kb));
  IriMinter fresh;
  fresh.observe(copy);
  const std::string next = fresh.mint("annotation").value();
  EXPECT_TRUE(std::none_of(s.annotations.begin(), s.annotations.end(), [&](const auto& a) { return a == next; }));
}

}  // namespace
}  // namespace cbi::kb
