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

#include <functional>
#include <mutex>
#include <string>
#include <string_view>

#include "cbi/kb/iri.hpp"
#include "cbi/kb/store.hpp"
#include "cbi/time.hpp"

namespace cbi::collab {

using Clock = std::function<Timestamp()>;

/// State shared by the session and annotation managers. `writer` is the
/// single-writer lock: every check-then-mutate sequence holds it.
struct CollabStore {
  kb::KnowledgeBase kb;
  kb::IriMinter minter;
  std::mutex writer;
  Clock clock = system_now;
};

namespace detail {

inline kb::Term term_of(std::string_view iri_value, std::string_view what) {
  try {
    return kb::iri(iri_value);
  } catch (const Error&) {
    fail(ErrorKind::Validation, std::string(what) + " '" + std::string(iri_value) + "' is not an IRI");
  }
}

inline bool has_type(const kb::KnowledgeBase& kb, const kb::Term& s, std::string_view cls) {
  return kb.contains({s, kb::vocab::type(), kb::iri(cls)});
}

}  // namespace detail

}  // namespace cbi::collab
