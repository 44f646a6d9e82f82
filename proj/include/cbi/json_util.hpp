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
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cbi/error.hpp"

namespace cbi {

// Member order matters for every document format in this project.
using Json = nlohmann::ordered_json;

/// Parses JSON text, turning syntax errors into ParseError with
/// line and column of the offending byte. Duplicate object keys are
/// rejected with a Schema error instead of being collapsed.
inline Json parse_json(std::string_view text, std::string_view what = "document") {
  std::vector<std::set<std::string>> open_objects;
  Json::parser_callback_t reject_duplicates =
      [&open_objects](int, Json::parse_event_t event, Json& parsed) {
        switch (event) {
          case Json::parse_event_t::object_start:
            open_objects.emplace_back();
            break;
          case Json::parse_event_t::object_end:
            open_objects.pop_back();
            break;
          case Json::parse_event_t::key: {
            const auto& key = parsed.get_ref<const std::string&>();
            if (!open_objects.back().insert(key).second) {
              fail(ErrorKind::Schema, "duplicate key '" + key + "'");
            }
            break;
          }
          default:
            break;
        }
        return true;
      };
  try {
    return Json::parse(text.begin(), text.end(), reject_duplicates);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(line, "column " + std::to_string(col) + ": malformed " +
                               std::string(what) + " JSON");
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace json_fields {

inline void reject_unknown(const Json& obj, std::initializer_list<std::string_view> allowed,
                           std::string_view context) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto a : allowed) known = known || it.key() == a;
    if (!known) {
      fail(ErrorKind::Schema, "unknown key '" + it.key() + "' in " + std::string(context));
    }
  }
}

inline const Json& require(const Json& obj, std::string_view key, std::string_view context) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    fail(ErrorKind::Schema, "missing key '" + std::string(key) + "' in " + std::string(context));
  }
  return *it;
}

inline std::string string_of(const Json& v, std::string_view context) {
  if (!v.is_string()) fail(ErrorKind::Schema, std::string(context) + " must be a string");
  return v.get<std::string>();
}

inline const Json& object_of(const Json& v, std::string_view context) {
  if (!v.is_object()) fail(ErrorKind::Schema, std::string(context) + " must be an object");
  return v;
}

inline const Json& array_of(const Json& v, std::string_view context) {
  if (!v.is_array()) fail(ErrorKind::Schema, std::string(context) + " must be an array");
  return v;
}

}  // namespace json_fields
}  // namespace cbi
