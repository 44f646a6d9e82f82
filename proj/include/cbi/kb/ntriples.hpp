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

#include <istream>
#include <sstream>
#include <string>
#include <string_view>

#include "cbi/error.hpp"
#include "cbi/kb/store.hpp"

// Line format: one `<s> <p> <o> .` per line, a subset of N-Triples. Blank
// lines and `#` comments are ignored on input; output is sorted.

namespace cbi::kb {

inline std::string serialize_kb(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& t : kb.triples()) {
    out += render(t);
    out += '\n';
  }
  return out;
}

namespace detail {

class LineReader {
 public:
  LineReader(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  [[noreturn]] void error(const std::string& msg) const {
    throw ParseError(line_, "column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  template <typename F>
  auto checked(F&& f) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      error(e.what());
    }
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ == s_.size();
  }

  std::string read_iri() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '<') error("expected '<'");
    const auto close = s_.find('>', pos_ + 1);
    if (close == std::string_view::npos) error("unterminated IRI");
    std::string value(s_.substr(pos_ + 1, close - pos_ - 1));
    pos_ = close + 1;
    return value;
  }

  Term read_term() {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '<') return checked([&] { return Term::iri(read_iri()); });
    if (pos_ >= s_.size() || s_[pos_] != '"') error("expected an IRI or a literal");
    const std::size_t start = pos_;
    ++pos_;
    std::string lexical;
    bool closed = false;
    while (pos_ < s_.size()) {
      const char c = s_[pos_++];
      if (c == '"') {
        closed = true;
        break;
      }
      if (c != '\\') {
        lexical += c;
        continue;
      }
      if (pos_ >= s_.size()) break;
      switch (const char e = s_[pos_++]) {
        case '\\': lexical += '\\'; break;
        case '"': lexical += '"'; break;
        case 'n': lexical += '\n'; break;
        case 'r': lexical += '\r'; break;
        case 't': lexical += '\t'; break;
        case 'u': append_utf8(read_hex(4), lexical); break;
        case 'U': append_utf8(read_hex(8), lexical); break;
        default: error(std::string("unknown escape \\") + e);
      }
    }
    if (!closed) {
      pos_ = start;
      error("unterminated literal");
    }
    LiteralType type = LiteralType::Text;
    if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      const std::string dt = read_iri();
      if (dt == std::string(kXsd) + "string") {
        type = LiteralType::Text;
      } else if (dt == datatype_iri(LiteralType::Integer)) {
        type = LiteralType::Integer;
      } else if (dt == datatype_iri(LiteralType::DateTime)) {
        type = LiteralType::DateTime;
      } else if (dt == datatype_iri(LiteralType::Decimal)) {
        type = LiteralType::Decimal;
      } else if (dt == datatype_iri(LiteralType::Geo)) {
        type = LiteralType::Geo;
      } else {
        error("unsupported datatype <" + dt + ">");
      }
    } else if (pos_ < s_.size() && s_[pos_] == '@') {
      error("language-tagged literals are not supported");
    }
    return checked([&] { return Term::literal(type, lexical); });
  }

  void expect_dot() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '.') error("expected '.'");
    ++pos_;
    if (!at_end()) error("trailing characters after '.'");
  }

 private:
  uint32_t read_hex(int digits) {
    if (pos_ + static_cast<std::size_t>(digits) > s_.size()) error("truncated unicode escape");
    uint32_t v = 0;
    for (int i = 0; i < digits; ++i) {
      const char c = s_[pos_++];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= static_cast<uint32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') v |= static_cast<uint32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v |= static_cast<uint32_t>(c - 'A' + 10);
      else error("bad hex digit in unicode escape");
    }
    return v;
  }

  void append_utf8(uint32_t cp, std::string& out) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) error("invalid code point");
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

}  // namespace detail

/// Parses the line format into `kb`. Any malformed line, including one
/// that fails vocabulary validation, raises ParseError with its number.
inline void parse_kb_into(std::istream& in, KnowledgeBase& kb) {
  std::string line;
  std::size_t line_no = 0;
  Batch batch;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    detail::LineReader r(line, line_no);
    Triple t{r.read_term(), r.read_term(), r.read_term()};
    r.expect_dot();
    r.checked([&] {
      kb.validate(t);
      return 0;
    });
    batch.add.push_back(std::move(t));
  }
  kb.apply(batch);
}

inline KnowledgeBase parse_kb(std::istream& in, const Vocabulary& vocabulary = Vocabulary::cbiont()) {
  KnowledgeBase kb(vocabulary);
  parse_kb_into(in, kb);
  return kb;
}

inline KnowledgeBase parse_kb(std::string_view text, const Vocabulary& vocabulary = Vocabulary::cbiont()) {
  std::istringstream in{std::string(text)};
  return parse_kb(in, vocabulary);
}

}  // namespace cbi::kb
