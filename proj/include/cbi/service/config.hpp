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
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "cbi/error.hpp"
#include "cbi/json_util.hpp"
#include "cbi/ssb/csv.hpp"
#include "cbi/ssb/generator.hpp"

namespace cbi::service {

struct ServiceConfig {
  std::string listen = "127.0.0.1:8080";
  std::filesystem::path data_dir = "cbi-data";
  std::optional<std::string> token;
  char delimiter = ssb::kDefaultDelimiter;
  ssb::GeneratorConfig generator;
};

/// A CSV delimiter is a single character other than a line break.
inline char parse_delimiter(std::string_view s) {
  if (s.size() != 1 || s[0] == '\n' || s[0] == '\r') {
    fail(ErrorKind::InvalidArgument, "delimiter '" + std::string(s) + "' must be one character");
  }
  return s[0];
}

struct ListenAddress {
  std::string host;
  int port = 0;
};

/// `host:port`, port in [0, 65535]; 0 asks the OS for a free port.
inline ListenAddress parse_listen(std::string_view s) {
  const auto colon = s.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    fail(ErrorKind::InvalidArgument, "listen address '" + std::string(s) + "' is not host:port");
  }
  int port = -1;
  const auto digits = s.substr(colon + 1);
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || p != digits.data() + digits.size() || port < 0 || port > 65535) {
    fail(ErrorKind::InvalidArgument, "listen address '" + std::string(s) + "' has no valid port");
  }
  return {std::string(s.substr(0, colon)), port};
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// A value is a double-quoted string (JSON escapes) or a bare integer.
struct ConfigValue {
  std::optional<std::string> text;
  std::optional<int64_t> integer;
};

inline ConfigValue parse_value(const std::string& raw, std::size_t line, const std::string& source) {
  ConfigValue v;
  if (!raw.empty() && raw[0] == '"') {
    try {
      Json j = Json::parse(raw);
      if (!j.is_string()) throw ParseError(line, "expected a string", source);
      v.text = j.get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw ParseError(line, "malformed string value", source);
    }
    return v;
  }
  int64_t n = 0;
  auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), n);
  if (raw.empty() || ec != std::errc() || p != raw.data() + raw.size()) {
    throw ParseError(line, "value must be a quoted string or an integer", source);
  }
  v.integer = n;
  return v;
}

}  // namespace detail

/// Reads `key = value` lines over `base`. Top-level keys: listen, data_dir,
/// token, delimiter. Under `[generator]`: seed, fact_rows, customers, suppliers,
/// parts, dates. `#` starts a comment line.
inline ServiceConfig parse_config(std::string_view text, const std::string& source = "cbi.toml",
                                  ServiceConfig base = {}) {
  ServiceConfig cfg = std::move(base);
  std::istringstream in{std::string(text)};
  std::string raw_line, section;
  std::size_t line = 0;
  while (std::getline(in, raw_line)) {
    ++line;
    const std::string l = detail::trim(raw_line);
    if (l.empty() || l[0] == '#') continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw ParseError(line, "unterminated section header", source);
      section = detail::trim(std::string_view(l).substr(1, l.size() - 2));
      if (section != "generator") throw ParseError(line, "unknown section [" + section + "]", source);
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value", source);
    const std::string key = detail::trim(std::string_view(l).substr(0, eq));
    const auto value = detail::parse_value(detail::trim(std::string_view(l).substr(eq + 1)), line, source);
    const auto need_text = [&]() -> std::string {
      if (!value.text) throw ParseError(line, "'" + key + "' takes a quoted string", source);
      return *value.text;
    };
    const auto need_int = [&]() -> int64_t {
      if (!value.integer) throw ParseError(line, "'" + key + "' takes an integer", source);
      return *value.integer;
    };
    if (section.empty()) {
      if (key == "listen") {
        cfg.listen = need_text();
      } else if (key == "data_dir") {
        cfg.data_dir = need_text();
      } else if (key == "token") {
        cfg.token = need_text();
      } else if (key == "delimiter") {
        try {
          cfg.delimiter = parse_delimiter(need_text());
        } catch (const Error& e) {
          throw ParseError(line, e.what(), source);
        }
      } else {
        throw ParseError(line, "unknown key '" + key + "'", source);
      }
    } else {
      auto& g = cfg.generator;
      if (key == "seed") {
        g.seed = static_cast<uint64_t>(need_int());
      } else if (key == "fact_rows") {
        g.fact_rows = need_int();
      } else if (key == "customers") {
        g.customers = need_int();
      } else if (key == "suppliers") {
        g.suppliers = need_int();
      } else if (key == "parts") {
        g.parts = need_int();
      } else if (key == "dates") {
        g.dates = need_int();
      } else {
        throw ParseError(line, "unknown key '" + key + "' in [generator]", source);
      }
    }
  }
  return cfg;
}

inline ServiceConfig load_config(const std::filesystem::path& path, ServiceConfig base = {}) {
  return parse_config(read_file(path), path.string(), std::move(base));
}

/// CBI_DATA_DIR, CBI_LISTEN and CBI_TOKEN override file values.
inline void apply_env(ServiceConfig& cfg,
                      const std::function<const char*(const char*)>& getenv = [](const char* k) {
                        return std::getenv(k);
                      }) {
  if (const char* v = getenv("CBI_DATA_DIR"); v && *v) cfg.data_dir = v;
  if (const char* v = getenv("CBI_LISTEN"); v && *v) cfg.listen = v;
  if (const char* v = getenv("CBI_TOKEN"); v && *v) cfg.token = v;
}

}  // namespace cbi::service
