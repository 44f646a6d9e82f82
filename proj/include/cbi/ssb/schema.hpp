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
#include <string_view>
#include <vector>

#include "cbi/ssb/table.hpp"

namespace cbi::ssb {

// Degenerate dimensions of LINEORDER with closed value domains.
inline constexpr std::array<std::string_view, 7> kShipModes = {
    "AIR", "SHIP", "MAIL", "FOB", "TRUCK", "RIG AIR", "RAIL"};
inline constexpr std::array<std::string_view, 5> kOrderPriorities = {
    "URGENT", "HIGH", "MEDIUM", "NOT SPECIFIED", "LOW"};

inline constexpr std::string_view kLineorder = "LINEORDER";
inline constexpr std::string_view kCustomer = "CUSTOMER";
inline constexpr std::string_view kSupplier = "SUPPLIER";
inline constexpr std::string_view kPart = "PART";
inline constexpr std::string_view kDwdate = "DWDATE";

namespace detail {
template <std::size_t N>
std::vector<std::string> domain_of(const std::array<std::string_view, N>& values) {
  return {values.begin(), values.end()};
}
}  // namespace detail

inline TableSchema lineorder_schema() {
  using T = ColumnType;
  return TableSchema{
      std::string(kLineorder),
      {
          {"lo_orderkey", T::Integer, {}},
          {"lo_linenumber", T::Text, {}},
          {"lo_custkey", T::Integer, {}},
          {"lo_partkey", T::Integer, {}},
          {"lo_suppkey", T::Integer, {}},
          {"lo_orderdate", T::Date, {}},
          {"lo_orderpriority", T::Text, detail::domain_of(kOrderPriorities)},
          {"lo_shippriority", T::Text, {}},
          {"lo_quantity", T::Integer, {}},
          {"lo_extendedprice", T::Decimal, {}},
          {"lo_ordtotalprice", T::Decimal, {}},
          {"lo_discount", T::Integer, {}},
          {"lo_revenue", T::Decimal, {}},
          {"lo_supplycost", T::Decimal, {}},
          {"lo_tax", T::Integer, {}},
          {"lo_commitdate", T::Date, {}},
          {"lo_shipmode", T::Text, detail::domain_of(kShipModes)},
      },
      std::nullopt,
      {
          {"lo_custkey", std::string(kCustomer), "c_custkey"},
          {"lo_partkey", std::string(kPart), "p_partkey"},
          {"lo_suppkey", std::string(kSupplier), "s_suppkey"},
      },
  };
}

inline TableSchema customer_schema() {
  using T = ColumnType;
  return TableSchema{std::string(kCustomer),
                     {{"c_custkey", T::Integer, {}},
                      {"c_name", T::Text, {}},
                      {"c_city", T::Text, {}},
                      {"c_nation", T::Text, {}},
                      {"c_region", T::Text, {}},
                      {"c_mktsegment", T::Text, {}}},
                     "c_custkey",
                     {}};
}

inline TableSchema supplier_schema() {
  using T = ColumnType;
  return TableSchema{std::string(kSupplier),
                     {{"s_suppkey", T::Integer, {}},
                      {"s_name", T::Text, {}},
                      {"s_city", T::Text, {}},
                      {"s_nation", T::Text, {}},
                      {"s_region", T::Text, {}}},
                     "s_suppkey",
                     {}};
}

inline TableSchema part_schema() {
  using T = ColumnType;
  return TableSchema{std::string(kPart),
                     {{"p_partkey", T::Integer, {}},
                      {"p_name", T::Text, {}},
                      {"p_mfgr", T::Text, {}},
                      {"p_category", T::Text, {}},
                      {"p_brand1", T::Text, {}},
                      {"p_color", T::Text, {}},
                      {"p_size", T::Integer, {}}},
                     "p_partkey",
                     {}};
}

inline TableSchema dwdate_schema() {
  using T = ColumnType;
  return TableSchema{std::string(kDwdate),
                     {{"d_datekey", T::Date, {}},
                      {"d_year", T::Integer, {}},
                      {"d_month", T::Text, {}},
                      {"d_yearmonthnum", T::Integer, {}},
                      {"d_dayofweek", T::Text, {}}},
                     "d_datekey",
                     {}};
}

/// The five SSB tables in load order (dimensions before the fact table).
inline std::vector<TableSchema> ssb_schemas() {
  return {customer_schema(), supplier_schema(), part_schema(), dwdate_schema(),
          lineorder_schema()};
}

}  // namespace cbi::ssb
