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

#include <array>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "cbi/error.hpp"
#include "cbi/ssb/schema.hpp"
#include "cbi/ssb/table.hpp"
#include "cbi/time.hpp"

namespace cbi::ssb {

/// splitmix64 (Steele, Lea, Flood). Constants are the published ones, so a
/// given seed yields the same stream in any implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() noexcept {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, n): high 64 bits of next() * n.
  uint64_t below(uint64_t n) noexcept {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform in [lo, hi], inclusive.
  int64_t between(int64_t lo, int64_t hi) noexcept {
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

 private:
  uint64_t state_;
};

struct GeneratorConfig {
  uint64_t seed = 42;
  int64_t fact_rows = 10000;
  int64_t customers = 300;
  int64_t suppliers = 20;
  int64_t parts = 2000;
  int64_t dates = 2406;  // 1992-01-01 .. 1998-08-02
  Date order_date_first = Date::from_civil(1992, 1, 1);
  Date order_date_last = Date::from_civil(1998, 8, 2);
};

namespace detail {

struct Nation {
  std::string_view name;
  std::string_view region;
};

inline constexpr std::array<Nation, 25> kNations = {{
    {"ALGERIA", "AFRICA"},        {"ARGENTINA", "AMERICA"},
    {"BRAZIL", "AMERICA"},        {"CANADA", "AMERICA"},
    {"EGYPT", "MIDDLE EAST"},     {"ETHIOPIA", "AFRICA"},
    {"FRANCE", "EUROPE"},         {"GERMANY", "EUROPE"},
    {"INDIA", "ASIA"},            {"INDONESIA", "ASIA"},
    {"IRAN", "MIDDLE EAST"},      {"IRAQ", "MIDDLE EAST"},
    {"JAPAN", "ASIA"},            {"JORDAN", "MIDDLE EAST"},
    {"KENYA", "AFRICA"},          {"MOROCCO", "AFRICA"},
    {"MOZAMBIQUE", "AFRICA"},     {"PERU", "AMERICA"},
    {"CHINA", "ASIA"},            {"ROMANIA", "EUROPE"},
    {"SAUDI ARABIA", "MIDDLE EAST"}, {"VIETNAM", "ASIA"},
    {"RUSSIA", "EUROPE"},         {"UNITED KINGDOM", "EUROPE"},
    {"UNITED STATES", "AMERICA"},
}};

inline constexpr std::array<std::string_view, 5> kSegments = {
    "AUTOMOBILE", "BUILDING", "FURNITURE", "HOUSEHOLD", "MACHINERY"};

inline constexpr std::array<std::string_view, 12> kColors = {
    "almond", "azure", "black", "blue",  "coral", "cyan",
    "forest", "ivory", "khaki", "linen", "olive", "peach"};

inline constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

inline constexpr std::array<std::string_view, 7> kWeekdays = {
    "Thursday", "Friday", "Saturday", "Sunday", "Monday", "Tuesday", "Wednesday"};

// SSB city: nation name padded or cut to nine characters plus one digit.
inline std::string city_of(std::string_view nation, int64_t digit) {
  std::string city(nation.substr(0, 9));
  city.resize(9, ' ');
  city += static_cast<char>('0' + digit);
  return city;
}

inline std::string keyed_name(std::string_view prefix, int64_t key) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%09lld", static_cast<long long>(key));
  return std::string(prefix) + "#" + buf;
}

// Part retail price in cents, as in the TPC-H family.
constexpr int64_t retail_price_cents(int64_t partkey) {
  return 90000 + ((partkey / 10) % 20001) + 100 * (partkey % 1000);
}

inline std::vector<Column> empty_columns(const TableSchema& schema,
                                         std::size_t rows) {
  std::vector<Column> cols;
  cols.reserve(schema.columns.size());
  for (const auto& spec : schema.columns) {
    cols.emplace_back(spec.type);
    cols.back().reserve(rows);
  }
  return cols;
}

}  // namespace detail

/// Builds a seeded SSB-style dataset. Throws InvalidArgument for any
/// non-positive size.
inline Dataset generate_dataset(const GeneratorConfig& cfg) {
  using namespace detail;
  const auto require_positive = [](int64_t v, const char* what) {
    if (v < 1) {
      fail(ErrorKind::InvalidArgument,
           std::string(what) + " must be positive, got " + std::to_string(v));
    }
  };
  require_positive(cfg.fact_rows, "fact_rows");
  require_positive(cfg.customers, "customers");
  require_positive(cfg.suppliers, "suppliers");
  require_positive(cfg.parts, "parts");
  require_positive(cfg.dates, "dates");
  if (cfg.order_date_last < cfg.order_date_first) {
    fail(ErrorKind::InvalidArgument, "order date range is empty");
  }

  SplitMix64 rng(cfg.seed);
  std::vector<Table> tables;

  {
    auto schema = customer_schema();
    auto cols = empty_columns(schema, static_cast<std::size_t>(cfg.customers));
    for (int64_t k = 1; k <= cfg.customers; ++k) {
      const Nation& n = kNations[rng.below(kNations.size())];
      cols[0].append_int(k);
      cols[1].append_text(keyed_name("Customer", k));
      cols[2].append_text(city_of(n.name, rng.between(0, 9)));
      cols[3].append_text(n.name);
      cols[4].append_text(n.region);
      cols[5].append_text(kSegments[rng.below(kSegments.size())]);
    }
    tables.emplace_back(std::move(schema), std::move(cols));
  }
  {
    auto schema = supplier_schema();
    auto cols = empty_columns(schema, static_cast<std::size_t>(cfg.suppliers));
    for (int64_t k = 1; k <= cfg.suppliers; ++k) {
      const Nation& n = kNations[rng.below(kNations.size())];
      cols[0].append_int(k);
      cols[1].append_text(keyed_name("Supplier", k));
      cols[2].append_text(city_of(n.name, rng.between(0, 9)));
      cols[3].append_text(n.name);
      cols[4].append_text(n.region);
    }
    tables.emplace_back(std::move(schema), std::move(cols));
  }
  {
    auto schema = part_schema();
    auto cols = empty_columns(schema, static_cast<std::size_t>(cfg.parts));
    for (int64_t k = 1; k <= cfg.parts; ++k) {
      const int64_t mfgr = rng.between(1, 5);
      const int64_t category = mfgr * 10 + rng.between(1, 5);
      const int64_t brand = category * 100 + rng.between(1, 40);
      std::string_view color = kColors[rng.below(kColors.size())];
      cols[0].append_int(k);
      cols[1].append_text(std::string(color) + " " +
                          std::string(kColors[rng.below(kColors.size())]));
      cols[2].append_text("MFGR#" + std::to_string(mfgr));
      cols[3].append_text("MFGR#" + std::to_string(category));
      cols[4].append_text("MFGR#" + std::to_string(brand));
      cols[5].append_text(color);
      cols[6].append_int(rng.between(1, 50));
    }
    tables.emplace_back(std::move(schema), std::move(cols));
  }
  {
    auto schema = dwdate_schema();
    auto cols = empty_columns(schema, static_cast<std::size_t>(cfg.dates));
    const Date first = Date::from_civil(1992, 1, 1);
    for (int64_t i = 0; i < cfg.dates; ++i) {
      const Date d{first.days + static_cast<int32_t>(i)};
      const CivilDate c = d.civil();
      cols[0].append_int(d.days);
      cols[1].append_int(c.year);
      cols[2].append_text(kMonths[c.month - 1]);
      cols[3].append_int(int64_t{c.year} * 100 + c.month);
      // 1970-01-01 was a Thursday.
      cols[4].append_text(kWeekdays[((d.days % 7) + 7) % 7]);
    }
    tables.emplace_back(std::move(schema), std::move(cols));
  }
  {
    auto schema = lineorder_schema();
    const auto rows = static_cast<std::size_t>(cfg.fact_rows);
    auto cols = empty_columns(schema, rows);
    std::vector<int64_t> totals;  // lo_ordtotalprice, filled per order
    totals.reserve(rows);
    int64_t produced = 0;
    for (int64_t orderkey = 1; produced < cfg.fact_rows; ++orderkey) {
      const int64_t lines = rng.between(1, 7);
      const int64_t custkey = rng.between(1, cfg.customers);
      const Date orderdate{static_cast<int32_t>(
          rng.between(cfg.order_date_first.days, cfg.order_date_last.days))};
      std::string_view priority =
          kOrderPriorities[rng.below(kOrderPriorities.size())];
      const std::size_t order_begin = totals.size();
      int64_t order_total = 0;
      for (int64_t line = 1; line <= lines && produced < cfg.fact_rows;
           ++line, ++produced) {
        const int64_t partkey = rng.between(1, cfg.parts);
        const int64_t suppkey = rng.between(1, cfg.suppliers);
        const int64_t quantity = rng.between(1, 50);
        const int64_t discount = rng.between(0, 10);
        const int64_t tax = rng.between(0, 8);
        const int64_t commit_lag = rng.between(30, 90);
        std::string_view mode = kShipModes[rng.below(kShipModes.size())];

        const int64_t unit = retail_price_cents(partkey);
        const int64_t extended = quantity * unit;
        const int64_t revenue = (extended * (100 - discount) + 50) / 100;
        const int64_t supplycost = (unit * 6 + 5) / 10;
        order_total +=
            (extended * (100 - discount) * (100 + tax) + 5000) / 10000;

        cols[0].append_int(orderkey);
        cols[1].append_text(std::to_string(line));
        cols[2].append_int(custkey);
        cols[3].append_int(partkey);
        cols[4].append_int(suppkey);
        cols[5].append_int(orderdate.days);
        cols[6].append_text(priority);
        cols[7].append_text("0");
        cols[8].append_int(quantity);
        cols[9].append_int(extended);
        totals.push_back(0);
        cols[11].append_int(discount);
        cols[12].append_int(revenue);
        cols[13].append_int(supplycost);
        cols[14].append_int(tax);
        cols[15].append_int(orderdate.days + commit_lag);
        cols[16].append_text(mode);
      }
      for (std::size_t i = order_begin; i < totals.size(); ++i) {
        totals[i] = order_total;
      }
    }
    for (int64_t t : totals) cols[10].append_int(t);
    tables.emplace_back(std::move(schema), std::move(cols));
  }
  return Dataset(std::move(tables));
}

}  // namespace cbi::ssb
