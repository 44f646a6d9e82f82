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

#include <stdexcept>
#include <string>
#include <string_view>

namespace cbi {

/// Error categories shared by every module. The service maps each category
/// onto one HTTP status (see status_of in service/service.hpp).
enum class ErrorKind {
  InvalidArgument,
  Parse,
  Integrity,
  DomainViolation,
  NotFound,
  Schema,
  Type,
  Unsupported,
  Validation,
  State,
  Authentication,
  Authorization,
  UnsupportedVersion,
  Import,
  Io,
  Internal,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::DomainViolation: return "domain-violation";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Type: return "type";
    case ErrorKind::Unsupported: return "unsupported-operation";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::State: return "state";
    case ErrorKind::Authentication: return "authentication";
    case ErrorKind::Authorization: return "authorization";
    case ErrorKind::UnsupportedVersion: return "unsupported-version";
    case ErrorKind::Import: return "import";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "internal";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure carrying a 1-based line number (0 when not line-oriented)
/// and optionally the file it came from.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message, const std::string& source = {})
      : Error(ErrorKind::Parse, (source.empty() ? std::string() : source + ": ") +
                                    (line == 0 ? message : "line " + std::to_string(line) + ": " + message)),
        line_(line),
        detail_(message),
        source_(source) {}

  std::size_t line() const noexcept { return line_; }
  /// Message without the line and source prefixes.
  const std::string& detail() const noexcept { return detail_; }
  const std::string& source() const noexcept { return source_; }

 private:
  std::size_t line_;
  std::string detail_;
  std::string source_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace cbi
