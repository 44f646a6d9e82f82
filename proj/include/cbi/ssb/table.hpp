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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cbi/error.hpp"
#include "cbi/value.hpp"

namespace cbi::ssb {

struct ColumnSpec {
  std::string name;
  ColumnType type = ColumnType::Integer;
  /// Closed value domain for text columns; empty means unrestricted.
  std::vector<std::string> domain;
};

struct ForeignKey {
  std::string column;
  std::string table;
  std::string ref_column;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnSpec> columns;
  std::optional<std::string> primary_key;
  std::vector<ForeignKey> foreign_keys;

  std::optional<std::size_t> index_of(std::string_view column) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i].name == column) return i;
    }
    return std::nullopt;
  }

  /// Throws Schema on duplicate column names or dangling key references.
  void check() const {
    std::unordered_set<std::string> seen;
    for (const auto& c : columns) {
      if (!seen.insert(c.name).second) {
        fail(ErrorKind::Schema,
             "duplicate column '" + c.name + "' in table " + name);
      }
    }
    if (primary_key && !index_of(*primary_key)) {
      fail(ErrorKind::Schema, "primary key '" + *primary_key +
                                  "' is not a column of " + name);
    }
    for (const auto& fk : foreign_keys) {
      if (!index_of(fk.column)) {
        fail(ErrorKind::Schema, "foreign key column '" + fk.column +
                                    "' is not a column of " + name);
      }
    }
  }
};

/// Column-major storage. Integer, decimal (cents) and date (days) columns
/// share an int64 payload; text columns are dictionary encoded with codes
/// assigned in first-seen order.
class Column {
 public:
  explicit Column(ColumnType type) : type_(type) {}

  ColumnType type() const noexcept { return type_; }
  std::size_t size() const noexcept {
    return type_ == ColumnType::Text ? codes_.size() : ints_.size();
  }

  void append_int(int64_t v) { ints_.push_back(v); }
  void append_text(std::string_view s) {
    auto it = lookup_.find(std::string(s));
    if (it == lookup_.end()) {
      const auto code = static_cast<uint32_t>(dictionary_.size());
      dictionary_.emplace_back(s);
      it = lookup_.emplace(dictionary_.back(), code).first;
    }
    codes_.push_back(it->second);
  }
  void reserve(std::size_t n) {
    if (type_ == ColumnType::Text) {
      codes_.reserve(n);
    } else {
      ints_.reserve(n);
    }
  }

  std::span<const int64_t> ints() const noexcept { return ints_; }
  std::span<const uint32_t> codes() const noexcept { return codes_; }
  const std::vector<std::string>& dictionary() const noexcept {
    return dictionary_;
  }
  std::optional<uint32_t> code_of(std::string_view s) const {
    auto it = lookup_.find(std::string(s));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::string_view text_at(std::size_t row) const {
    return dictionary_[codes_[row]];
  }
  Value value_at(std::size_t row) const {
    if (type_ == ColumnType::Text) return Value::text(std::string(text_at(row)));
    return Value::of_column(type_, ints_[row]);
  }

  friend bool operator==(const Column& a, const Column& b) {
    if (a.type_ != b.type_ || a.size() != b.size()) return false;
    if (a.type_ != ColumnType::Text) return a.ints_ == b.ints_;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.text_at(i) != b.text_at(i)) return false;
    }
    return true;
  }

 private:
  ColumnType type_;
  std::vector<int64_t> ints_;
  std::vector<uint32_t> codes_;
  std::vector<std::string> dictionary_;
  std::unordered_map<std::string, uint32_t> lookup_;
};

/// Immutable table. Construction validates column lengths, closed text
/// domains and primary-key uniqueness.
class Table {
 public:
  Table(TableSchema schema, std::vector<Column> columns)
      : schema_(std::move(schema)), columns_(std::move(columns)) {
    schema_.check();
    if (columns_.size() != schema_.columns.size()) {
      fail(ErrorKind::Schema, "table " + schema_.name + " expects " +
                                  std::to_string(schema_.columns.size()) +
                                  " columns, got " +
                                  std::to_string(columns_.size()));
    }
    rows_ = columns_.empty() ? 0 : columns_.front().size();
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      const auto& spec = schema_.columns[i];
      if (columns_[i].type() != spec.type) {
        fail(ErrorKind::Schema, "column " + spec.name + " has wrong type");
      }
      if (columns_[i].size() != rows_) {
        fail(ErrorKind::Integrity, "column " + spec.name + " of " +
                                       schema_.name +
                                       " has inconsistent length");
      }
      if (!spec.domain.empty()) check_domain(spec, columns_[i]);
    }
    if (schema_.primary_key) build_key_index();
  }

  const TableSchema& schema() const noexcept { return schema_; }
  const std::string& name() const noexcept { return schema_.name; }
  std::size_t row_count() const noexcept { return rows_; }

  const Column* find_column(std::string_view name) const {
    auto idx = schema_.index_of(name);
    return idx ? &columns_[*idx] : nullptr;
  }
  const Column& column(std::string_view name) const {
    if (const Column* c = find_column(name)) return *c;
    fail(ErrorKind::NotFound,
         "unknown column '" + std::string(name) + "' in table " + schema_.name);
  }
  const std::vector<Column>& columns() const noexcept { return columns_; }

  /// Row holding the given primary-key payload (integer/date value or
  /// dictionary code for text keys).
  std::optional<std::size_t> row_for_key(int64_t key) const {
    auto it = key_index_.find(key);
    if (it == key_index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const Table& a, const Table& b) {
    return a.schema_.name == b.schema_.name && a.columns_ == b.columns_;
  }

 private:
  static void check_domain(const ColumnSpec& spec, const Column& col) {
    for (const auto& v : col.dictionary()) {
      if (std::find(spec.domain.begin(), spec.domain.end(), v) ==
          spec.domain.end()) {
        fail(ErrorKind::DomainViolation,
             "value '" + v + "' outside the closed domain of " + spec.name);
      }
    }
  }

  void build_key_index() {
    const Column& key = column(*schema_.primary_key);
    key_index_.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      const int64_t k = key.type() == ColumnType::Text
                            ? static_cast<int64_t>(key.codes()[r])
                            : key.ints()[r];
      if (!key_index_.emplace(k, r).second) {
        fail(ErrorKind::Integrity,
             "duplicate primary key " + key.value_at(r).to_display() +
                 " in table " + schema_.name + " at row " +
                 std::to_string(r + 1));
      }
    }
  }

  TableSchema schema_;
  std::vector<Column> columns_;
  std::size_t rows_ = 0;
  std::unordered_map<int64_t, std::size_t> key_index_;
};

/// Read-only view over one stored column.
class ColumnView {
 public:
  ColumnView(const Column& col, std::size_t rows) : col_(&col), rows_(rows) {}

  ColumnType type() const noexcept { return col_->type(); }
  std::size_t size() const noexcept { return rows_; }
  Value operator[](std::size_t row) const { return col_->value_at(row); }
  std::span<const int64_t> ints() const noexcept { return col_->ints(); }
  std::span<const uint32_t> codes() const noexcept { return col_->codes(); }
  std::string_view text_at(std::size_t row) const { return col_->text_at(row); }
  const Column& column() const noexcept { return *col_; }

 private:
  const Column* col_;
  std::size_t rows_;
};

/// Immutable collection of tables with foreign keys checked at construction.
/// Shared across readers via shared_ptr<const Dataset>.
class Dataset {
 public:
  Dataset() = default;

  explicit Dataset(std::vector<Table> tables) {
    for (auto& t : tables) {
      std::string name = t.name();
      auto ptr = std::make_shared<const Table>(std::move(t));
      if (!tables_.emplace(name, std::move(ptr)).second) {
        fail(ErrorKind::Schema, "duplicate table " + name);
      }
    }
    check_foreign_keys();
  }

  const Table* find_table(std::string_view name) const {
    auto it = tables_.find(std::string(name));
    return it == tables_.end() ? nullptr : it->second.get();
  }
  const Table& table(std::string_view name) const {
    if (const Table* t = find_table(name)) return *t;
    fail(ErrorKind::NotFound, "unknown table '" + std::string(name) + "'");
  }

  ColumnView column_view(std::string_view table_name,
                         std::string_view column_name) const {
    const Table& t = table(table_name);
    return ColumnView(t.column(column_name), t.row_count());
  }

  std::vector<std::string> table_names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : tables_) out.push_back(name);
    return out;
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    if (a.tables_.size() != b.tables_.size()) return false;
    for (const auto& [name, t] : a.tables_) {
      const Table* other = b.find_table(name);
      if (!other || !(*t == *other)) return false;
    }
    return true;
  }

 private:
  void check_foreign_keys() const {
    for (const auto& [name, t] : tables_) {
      for (const auto& fk : t->schema().foreign_keys) {
        const Table* ref = find_table(fk.table);
        if (!ref) {
          fail(ErrorKind::Integrity, "foreign key " + name + "." + fk.column +
                                         " references missing table " +
                                         fk.table);
        }
        if (!ref->schema().primary_key ||
            *ref->schema().primary_key != fk.ref_column) {
          fail(ErrorKind::Schema, "foreign key " + name + "." + fk.column +
                                      " must reference the primary key of " +
                                      fk.table);
        }
        const Column& col = t->column(fk.column);
        if (col.type() == ColumnType::Text) {
          fail(ErrorKind::Schema, "text foreign keys are not supported");
        }
        auto values = col.ints();
        for (std::size_t r = 0; r < values.size(); ++r) {
          if (!ref->row_for_key(values[r])) {
            fail(ErrorKind::Integrity,
                 "row " + std::to_string(r + 1) + " of " + name + ": " +
                     fk.column + "=" + std::to_string(values[r]) +
                     " has no match in " + fk.table + "." + fk.ref_column);
          }
        }
      }
    }
  }

  std::map<std::string, std::shared_ptr<const Table>, std::less<>> tables_;
};

}  // namespace cbi::ssb
