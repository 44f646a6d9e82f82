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
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cbi/decimal.hpp"
#include "cbi/error.hpp"
#include "cbi/ssb/schema.hpp"
#include "cbi/ssb/table.hpp"
#include "cbi/time.hpp"

namespace cbi::ssb {

inline constexpr char kDefaultDelimiter = '|';

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line,
                                                  char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline void append_field(Column& col, const ColumnSpec& spec,
                         std::string_view field, std::size_t line) {
  const auto bad = [&](const char* what) {
    throw ParseError(line, "column " + spec.name + ": cannot parse '" +
                               std::string(field) + "' as " + what);
  };
  switch (spec.type) {
    case ColumnType::Integer: {
      int64_t v = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        bad("integer");
      col.append_int(v);
      break;
    }
    case ColumnType::Decimal: {
      auto cents = parse_cents(field);
      if (!cents) bad("decimal");
      col.append_int(*cents);
      break;
    }
    case ColumnType::Date: {
      auto d = parse_date(field);
      if (!d) bad("date (YYYY-MM-DD)");
      col.append_int(d->days);
      break;
    }
    case ColumnType::Text:
      if (!spec.domain.empty() &&
          std::find(spec.domain.begin(), spec.domain.end(), field) ==
              spec.domain.end()) {
        throw Error(ErrorKind::DomainViolation,
                    "line " + std::to_string(line) + ": column " + spec.name +
                        ": value '" + std::string(field) +
                        "' outside the closed domain");
      }
      col.append_text(field);
      break;
  }
}

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace detail

/// Reads header-less delimited rows typed by `schema`. Empty lines are
/// skipped; line numbers in errors count every physical line.
inline Table load_csv(const TableSchema& schema, std::istream& in,
                      char delimiter = kDefaultDelimiter) {
  schema.check();
  std::vector<Column> cols;
  for (const auto& spec : schema.columns) cols.emplace_back(spec.type);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_fields(line, delimiter);
    if (fields.size() != schema.columns.size()) {
      throw ParseError(line_no, "expected " +
                                    std::to_string(schema.columns.size()) +
                                    " fields, got " +
                                    std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      detail::append_field(cols[i], schema.columns[i], fields[i], line_no);
    }
  }
  return Table(schema, std::move(cols));
}

inline void write_csv(const Table& table, std::ostream& out,
                      char delimiter = kDefaultDelimiter) {
  const auto& cols = table.columns();
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out << delimiter;
      const std::string cell = cols[c].value_at(r).to_display();
      if (cell.find(delimiter) != std::string::npos) {
        fail(ErrorKind::InvalidArgument, "value '" + cell +
                                             "' contains the delimiter");
      }
      out << cell;
    }
    out << '\n';
  }
}

/// File for a table inside a dataset directory, e.g. `lineorder.csv`.
inline std::filesystem::path table_file(const std::filesystem::path& dir,
                                        std::string_view table) {
  return dir / (detail::lowercase(table) + ".csv");
}

inline void write_dataset(const Dataset& ds, const std::filesystem::path& dir,
                          char delimiter = kDefaultDelimiter) {
  std::filesystem::create_directories(dir);
  for (const auto& name : ds.table_names()) {
    const auto path = table_file(dir, name);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    write_csv(ds.table(name), out, delimiter);
    if (!out) fail(ErrorKind::Io, "write failed for " + path.string());
  }
}

/// Loads all five SSB tables from `dir`. Errors are prefixed with the file.
inline Dataset load_dataset(const std::filesystem::path& dir,
                            char delimiter = kDefaultDelimiter) {
  std::vector<Table> tables;
  for (const auto& schema : ssb_schemas()) {
    const auto path = table_file(dir, schema.name);
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
    try {
      tables.push_back(load_csv(schema, in, delimiter));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.detail(), path.filename().string());
    } catch (const Error& e) {
      throw Error(e.kind(), path.filename().string() + ": " + e.what());
    }
  }
  return Dataset(std::move(tables));
}

}  // namespace cbi::ssb
