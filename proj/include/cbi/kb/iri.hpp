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

#include <charconv>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "cbi/kb/store.hpp"

namespace cbi::kb {

inline constexpr std::string_view kInstancePrefix = "urn:cbi:";

/// Mints `urn:cbi:{kind}:{n}` with one monotonic counter per kind.
class IriMinter {
 public:
  Term mint(std::string_view kind) {
    std::lock_guard lock(mutex_);
    const uint64_t n = ++last_[std::string(kind)];
    return Term::iri(std::string(kInstancePrefix) + std::string(kind) + ":" + std::to_string(n));
  }

  /// Moves counters past an existing instance IRI; other IRIs are ignored.
  void observe(std::string_view value) {
    if (value.substr(0, kInstancePrefix.size()) != kInstancePrefix) return;
    value.remove_prefix(kInstancePrefix.size());
    const auto colon = value.find(':');
    if (colon == std::string_view::npos) return;
    uint64_t n = 0;
    const auto digits = value.substr(colon + 1);
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || p != digits.data() + digits.size()) return;
    std::lock_guard lock(mutex_);
    auto& last = last_[std::string(value.substr(0, colon))];
    last = std::max(last, n);
  }

  void observe(const KnowledgeBase& kb) {
    for (const auto& t : kb.triples()) {
      observe(t.subject.value());
      if (t.object.is_iri()) observe(t.object.value());
    }
  }

 private:
  std::mutex mutex_;
  std::map<std::string, uint64_t> last_;
};

}  // namespace cbi::kb
