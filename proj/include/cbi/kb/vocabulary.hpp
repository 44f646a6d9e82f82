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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cbi/error.hpp"
#include "cbi/kb/term.hpp"

// Embedded CBIOnt subset: the user profile ontology (UPO, FOAF / TimeLine /
// GeoNames-derived terms) and the collaborative session ontology (CSO).

namespace cbi::kb {

namespace ns {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kUpo = "https://w3id.org/cbiont/upo#";
inline constexpr std::string_view kCso = "https://w3id.org/cbiont/cso#";
}  // namespace ns

namespace vocab {

inline std::string rdf(std::string_view local) { return std::string(ns::kRdf) + std::string(local); }
inline std::string upo(std::string_view local) { return std::string(ns::kUpo) + std::string(local); }
inline std::string cso(std::string_view local) { return std::string(ns::kCso) + std::string(local); }

inline const Term& type() {
  static const Term t = iri(rdf("type"));
  return t;
}

inline Term upo_term(std::string_view local) { return iri(upo(local)); }
inline Term cso_term(std::string_view local) { return iri(cso(local)); }

}  // namespace vocab

class Vocabulary {
 public:
  struct Property {
    std::string domain;  // class IRI hint, empty if unconstrained
    std::string range;   // class or datatype IRI hint
  };

  /// Adds a class. Superclasses must already exist, which keeps the subclass
  /// graph acyclic by construction.
  void add_class(std::string iri, const std::vector<std::string>& supers = {}) {
    if (classes_.count(iri)) fail(ErrorKind::Schema, "class " + iri + " declared twice");
    for (const auto& s : supers) {
      if (!classes_.count(s)) fail(ErrorKind::Schema, "superclass " + s + " of " + iri + " is undeclared");
    }
    classes_[iri] = std::set<std::string>(supers.begin(), supers.end());
    for (const auto& s : supers) subclasses_[s].insert(iri);
  }

  void add_property(std::string iri, std::string domain = {}, std::string range = {}) {
    if (properties_.count(iri)) fail(ErrorKind::Schema, "property " + iri + " declared twice");
    properties_[std::move(iri)] = Property{std::move(domain), std::move(range)};
  }

  bool is_class(std::string_view iri) const { return classes_.count(std::string(iri)) > 0; }
  bool is_property(std::string_view iri) const { return properties_.count(std::string(iri)) > 0; }
  const std::map<std::string, Property>& properties() const noexcept { return properties_; }
  std::vector<std::string> classes() const {
    std::vector<std::string> out;
    for (const auto& [c, _] : classes_) out.push_back(c);
    return out;
  }

  const std::set<std::string>& superclasses(std::string_view cls) const {
    static const std::set<std::string> none;
    auto it = classes_.find(std::string(cls));
    return it == classes_.end() ? none : it->second;
  }

  /// `cls` and every class below it.
  std::set<std::string> closure(std::string_view cls) const {
    std::set<std::string> out{std::string(cls)};
    std::vector<std::string> todo{std::string(cls)};
    while (!todo.empty()) {
      const std::string c = std::move(todo.back());
      todo.pop_back();
      auto it = subclasses_.find(c);
      if (it == subclasses_.end()) continue;
      for (const auto& sub : it->second) {
        if (out.insert(sub).second) todo.push_back(sub);
      }
    }
    return out;
  }

  bool is_subclass_of(std::string_view sub, std::string_view super) const {
    return closure(super).count(std::string(sub)) > 0;
  }

  static const Vocabulary& cbiont();

 private:
  std::map<std::string, std::set<std::string>> classes_;  // class -> direct supers
  std::map<std::string, std::set<std::string>> subclasses_;
  std::map<std::string, Property> properties_;
};

inline const Vocabulary& Vocabulary::cbiont() {
  static const Vocabulary v = [] {
    using vocab::cso;
    using vocab::upo;
    const std::string xsd(kXsd);
    Vocabulary voc;
    voc.add_property(vocab::rdf("type"));

    // UPO: persons.
    voc.add_class(upo("Person"));
    voc.add_property(upo("name"), "", xsd + "string");
    voc.add_property(upo("mbox"), upo("Person"));
    voc.add_property(upo("knows"), upo("Person"), upo("Person"));
    voc.add_property(upo("organization"), upo("Person"), xsd + "string");
    // UPO: time.
    voc.add_class(upo("Instant"));
    voc.add_class(upo("Interval"));
    voc.add_property(upo("start"), upo("Interval"), upo("Instant"));
    voc.add_property(upo("end"), upo("Interval"), upo("Instant"));
    voc.add_property(upo("atTime"), upo("Instant"), xsd + "dateTime");
    // UPO: place.
    voc.add_class(upo("Place"));
    voc.add_property(upo("locatedIn"), "", upo("Place"));
    voc.add_property(upo("latitude"), upo("Place"), xsd + "decimal");
    voc.add_property(upo("longitude"), upo("Place"), xsd + "decimal");
    voc.add_property(upo("virtualLocation"), "", xsd + "string");

    // CSO.
    voc.add_class(cso("CollaborativeSession"));
    voc.add_class(cso("Annotation"));
    for (const char* kind : {"Comment", "Question", "Answer", "Description"}) {
      voc.add_class(cso(kind), {cso("Annotation")});
    }
    voc.add_property(cso("hasParticipant"), cso("CollaborativeSession"), upo("Person"));
    voc.add_property(cso("hasInterval"), cso("CollaborativeSession"), upo("Interval"));
    voc.add_property(cso("annotates"), cso("Annotation"));
    voc.add_property(cso("hasBody"), cso("Annotation"), xsd + "string");
    voc.add_property(cso("hasAuthor"), cso("Annotation"), upo("Person"));
    voc.add_property(cso("inSession"), cso("Annotation"), cso("CollaborativeSession"));
    voc.add_property(cso("createdAt"), cso("Annotation"), xsd + "dateTime");
    voc.add_property(cso("modifiedAt"), cso("Annotation"), xsd + "dateTime");
    voc.add_property(cso("targetsCube"), cso("Annotation"), xsd + "string");
    voc.add_property(cso("targetsDashboardItem"), cso("Annotation"));
    voc.add_property(cso("capturesQuery"), cso("Annotation"), xsd + "string");
    voc.add_property(cso("inReplyTo"), cso("Answer"), cso("Question"));
    voc.add_property(cso("orphanedFrom"), cso("Answer"));
    return voc;
  }();
  return v;
}

}  // namespace cbi::kb
