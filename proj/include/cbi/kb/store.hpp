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
#include <cstdint>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cbi/error.hpp"
#include "cbi/kb/term.hpp"
#include "cbi/kb/vocabulary.hpp"

namespace cbi::kb {

/// A triple pattern; empty positions are wildcards.
struct Pattern {
  std::optional<Term> subject;
  std::optional<Term> predicate;
  std::optional<Term> object;
};

/// Retractions and assertions applied as one unit.
struct Batch {
  std::vector<Triple> retract;
  std::vector<Triple> add;
};

/// Triple store with set semantics. Terms are interned; three hash indexes
/// (subject, predicate, object) serve pattern matching. Readers share a
/// lock, writers are exclusive, and a Batch is applied under one exclusive
/// section so no reader sees it half done. Results are ordered by the
/// rendered form of subject, predicate, object.
class KnowledgeBase {
 public:
  explicit KnowledgeBase(const Vocabulary& vocabulary = Vocabulary::cbiont()) : vocab_(&vocabulary) {}

  KnowledgeBase(const KnowledgeBase& other) {
    std::shared_lock lock(other.mutex_);
    copy_from(other);
  }
  KnowledgeBase& operator=(const KnowledgeBase& other) {
    if (this == &other) return *this;
    KnowledgeBase tmp(other);
    std::unique_lock lock(mutex_);
    copy_from(tmp);
    return *this;
  }

  const Vocabulary& vocabulary() const noexcept { return *vocab_; }

  /// Validation error for IRIs outside the vocabulary where a vocabulary
  /// term is required: every predicate, and the object of rdf:type.
  void validate(const Triple& t) const {
    check_triple(t);
    if (!vocab_->is_property(t.predicate.value())) {
      fail(ErrorKind::Validation, "unknown property <" + t.predicate.value() + ">");
    }
    if (t.predicate == vocab::type() && (!t.object.is_iri() || !vocab_->is_class(t.object.value()))) {
      fail(ErrorKind::Validation, "rdf:type object " + render(t.object) + " is not a vocabulary class");
    }
  }

  /// True when the triple was not present before.
  bool assert_triple(const Triple& t) {
    validate(t);
    std::unique_lock lock(mutex_);
    return insert_locked(t);
  }

  /// False (and no change) when the triple was absent.
  bool retract_triple(const Triple& t) {
    std::unique_lock lock(mutex_);
    return erase_locked(t);
  }

  /// Validates every assertion first; on success applies retractions then
  /// assertions atomically.
  void apply(const Batch& batch) {
    for (const auto& t : batch.add) validate(t);
    std::unique_lock lock(mutex_);
    for (const auto& t : batch.retract) erase_locked(t);
    for (const auto& t : batch.add) insert_locked(t);
  }

  std::vector<Triple> match(const Pattern& p) const {
    std::shared_lock lock(mutex_);
    std::optional<uint32_t> ids[3];
    const std::optional<Term>* pos[3] = {&p.subject, &p.predicate, &p.object};
    for (int i = 0; i < 3; ++i) {
      if (!*pos[i]) continue;
      auto it = ids_.find(**pos[i]);
      if (it == ids_.end()) return {};
      ids[i] = it->second;
    }

    const KeySet* candidates = &triples_;
    for (int i = 0; i < 3; ++i) {
      if (!ids[i]) continue;
      auto it = index_[i].find(*ids[i]);
      if (it == index_[i].end()) return {};
      if (it->second.size() < candidates->size()) candidates = &it->second;
    }

    std::vector<Key> hits;
    for (const Key& k : *candidates) {
      if ((!ids[0] || k.s == *ids[0]) && (!ids[1] || k.p == *ids[1]) && (!ids[2] || k.o == *ids[2])) {
        hits.push_back(k);
      }
    }
    std::sort(hits.begin(), hits.end(), [&](const Key& a, const Key& b) {
      return std::tie(rendered_[a.s], rendered_[a.p], rendered_[a.o]) <
             std::tie(rendered_[b.s], rendered_[b.p], rendered_[b.o]);
    });
    std::vector<Triple> out;
    out.reserve(hits.size());
    for (const Key& k : hits) out.push_back({terms_[k.s], terms_[k.p], terms_[k.o]});
    return out;
  }

  std::vector<Triple> match(std::optional<Term> s, std::optional<Term> p, std::optional<Term> o) const {
    return match(Pattern{std::move(s), std::move(p), std::move(o)});
  }

  std::vector<Triple> triples() const { return match(Pattern{}); }

  bool contains(const Triple& t) const { return !match(t.subject, t.predicate, t.object).empty(); }

  /// Objects of (subject, predicate, ?), in match order.
  std::vector<Term> objects(const Term& subject, const Term& predicate) const {
    std::vector<Term> out;
    for (auto& t : match(subject, predicate, std::nullopt)) out.push_back(std::move(t.object));
    return out;
  }

  std::optional<Term> object(const Term& subject, const Term& predicate) const {
    auto all = objects(subject, predicate);
    if (all.empty()) return std::nullopt;
    return std::move(all.front());
  }

  /// Instances typed `cls`; with `transitive`, typed by any subclass too.
  std::vector<Term> instances_of(const Term& cls, bool transitive) const {
    if (!cls.is_iri() || !vocab_->is_class(cls.value())) {
      fail(ErrorKind::NotFound, "unknown class " + render(cls));
    }
    std::vector<Term> out;
    const auto classes = transitive ? vocab_->closure(cls.value()) : std::set<std::string>{cls.value()};
    for (const auto& c : classes) {
      for (auto& t : match(std::nullopt, vocab::type(), iri(c))) out.push_back(std::move(t.subject));
    }
    std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return render(a) < render(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return triples_.size();
  }

  void clear() {
    std::unique_lock lock(mutex_);
    terms_.clear();
    rendered_.clear();
    ids_.clear();
    triples_.clear();
    for (auto& idx : index_) idx.clear();
  }

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
    return a.triples() == b.triples();
  }

 private:
  struct Key {
    uint32_t s, p, o;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      uint64_t h = k.s;
      h = h * 0x9E3779B97F4A7C15ull ^ k.p;
      h = h * 0x9E3779B97F4A7C15ull ^ k.o;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };
  using KeySet = std::unordered_set<Key, KeyHash>;

  void copy_from(const KnowledgeBase& other) {
    vocab_ = other.vocab_;
    terms_ = other.terms_;
    rendered_ = other.rendered_;
    ids_ = other.ids_;
    triples_ = other.triples_;
    for (int i = 0; i < 3; ++i) index_[i] = other.index_[i];
  }

  uint32_t intern(const Term& t) {
    auto [it, inserted] = ids_.emplace(t, static_cast<uint32_t>(terms_.size()));
    if (inserted) {
      terms_.push_back(t);
      rendered_.push_back(render(t));
    }
    return it->second;
  }

  std::optional<Key> find_key(const Triple& t) const {
    auto s = ids_.find(t.subject), p = ids_.find(t.predicate), o = ids_.find(t.object);
    if (s == ids_.end() || p == ids_.end() || o == ids_.end()) return std::nullopt;
    return Key{s->second, p->second, o->second};
  }

  bool insert_locked(const Triple& t) {
    const Key k{intern(t.subject), intern(t.predicate), intern(t.object)};
    if (!triples_.insert(k).second) return false;
    index_[0][k.s].insert(k);
    index_[1][k.p].insert(k);
    index_[2][k.o].insert(k);
    return true;
  }

  bool erase_locked(const Triple& t) {
    const auto k = find_key(t);
    if (!k || !triples_.erase(*k)) return false;
    const uint32_t at[3] = {k->s, k->p, k->o};
    for (int i = 0; i < 3; ++i) {
      auto it = index_[i].find(at[i]);
      it->second.erase(*k);
      if (it->second.empty()) index_[i].erase(it);
    }
    return true;
  }

  const Vocabulary* vocab_;
  mutable std::shared_mutex mutex_;
  std::vector<Term> terms_;
  std::vector<std::string> rendered_;
  std::unordered_map<Term, uint32_t, TermHash> ids_;
  KeySet triples_;
  std::unordered_map<uint32_t, KeySet> index_[3];
};

}  // namespace cbi::kb
