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
#include <gtest/gtest.h>

#include "cbi/query/engine.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"
#include "support/random_query.hpp"

namespace cbi::query {
namespace {

using testing::lineorder_fixture_cube;
using testing::seeded_dataset;

ErrorKind kind_of_execute(const Query& q, const cube::CubeSchema& cube = lineorder_fixture_cube()) {
  try {
    execute(q, cube, seeded_dataset());
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "query was accepted: " << query_to_json(q).dump();
  return ErrorKind::Internal;
}

Query count_by(std::vector<std::string> dims) {
  Query q;
  q.cube = "Lineorder";
  q.measures = {"count"};
  q.dimensions = std::move(dims);
  return q;
}

TEST(BucketTime, TruncatesToPeriodStart) {
  const Date d = Date::from_civil(1996, 7, 19);
  EXPECT_EQ(bucket_time(d, Granularity::Day), d);
  EXPECT_EQ(bucket_time(d, Granularity::Month), Date::from_civil(1996, 7, 1));
  EXPECT_EQ(bucket_time(d, Granularity::Year), Date::from_civil(1996, 1, 1));
}

TEST(Engine, CountByShipModeCoversAllRows) {
  const ResultTable t = execute(count_by({"loShipmode"}), lineorder_fixture_cube(), seeded_dataset());
  ASSERT_EQ(t.header.size(), 2u);
  EXPECT_EQ(t.header[0].name, "loShipmode");
  EXPECT_EQ(t.header[1].role, ResultColumn::Role::Measure);
  EXPECT_LE(t.rows.size(), 7u);
  int64_t total = 0;
  for (const auto& r : t.rows) total += r[1].as_int();
  EXPECT_EQ(total, 10000);
  for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_LT(t.rows[i - 1][0], t.rows[i][0]);
}

TEST(Engine, NoDimensionsGivesOneRow) {
  Query q;
  q.cube = "Lineorder";
  q.measures = {"count", "loRevenue"};
  const ResultTable t = execute(q, lineorder_fixture_cube(), seeded_dataset());
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][0].as_int(), 10000);
  EXPECT_EQ(t.rows[0][1].kind(), Value::Kind::Decimal);
}

TEST(Engine, EmptySelectionGivesNoRows) {
  Query q = count_by({});
  q.filters.push_back({"loShipmode", FilterOp::Equals, {std::string("CANOE")}});
  EXPECT_TRUE(execute(q, lineorder_fixture_cube(), seeded_dataset()).rows.empty());
}

TEST(Engine, FixtureQueriesMatchOracle) {
  for (const char* name : {"count_by_shipmode", "count_by_priority", "shipmode_by_priority", "revenue_by_year"}) {
    const Query q = testing::fixture_query(name);
    std::string why;
    EXPECT_TRUE(testing::results_match(execute(q, lineorder_fixture_cube(), seeded_dataset()),
                                       testing::oracle_execute(q, lineorder_fixture_cube(), seeded_dataset()),
                                       &why))
        << name << ": " << why;
  }
}

TEST(Engine, FilteredTwoDimensionQueryIsBounded) {
  const Query q = testing::fixture_query("shipmode_by_priority");
  const ResultTable t = execute(q, lineorder_fixture_cube(), seeded_dataset());
  EXPECT_LE(t.rows.size(), 6u);
  for (const auto& r : t.rows) {
    EXPECT_TRUE(r[0].as_text() == "TRUCK" || r[0].as_text() == "AIR");
  }
}

TEST(Engine, RandomQueriesMatchOracle) {
  const auto& cube = lineorder_fixture_cube();
  testing::RandomQueryGenerator gen(cube, seeded_dataset(), 2024);
  for (int i = 0; i < 60; ++i) {
    const Query q = gen.next();
    std::string why;
    EXPECT_TRUE(testing::results_match(execute(q, cube, seeded_dataset()),
                                       testing::oracle_execute(q, cube, seeded_dataset()), &why))
        << query_to_json(q).dump() << ": " << why;
  }
}

TEST(Engine, RandomStarQueriesMatchOracle) {
  const auto& cube = testing::star_fixture_cube();
  const auto& ds = testing::small_dataset();
  testing::RandomQueryGenerator gen(cube, ds, 77);
  for (int i = 0; i < 40; ++i) {
    const Query q = gen.next();
    std::string why;
    EXPECT_TRUE(testing::results_match(execute(q, cube, ds), testing::oracle_execute(q, cube, ds), &why))
        << query_to_json(q).dump() << ": " << why;
  }
}

TEST(Engine, AverageUsesRealDivision) {
  const auto& cube = testing::star_fixture_cube();
  Query q;
  q.cube = cube.name;
  q.measures = {"avgQuantity"};
  const auto& lo = seeded_dataset().table("LINEORDER");
  long double sum = 0;
  for (auto v : lo.column("lo_quantity").ints()) sum += v;
  const ResultTable t = execute(q, cube, seeded_dataset());
  EXPECT_NEAR(t.rows[0][0].as_real(), static_cast<double>(sum / lo.row_count()), 1e-9);
}

TEST(Engine, OrderByAndLimit) {
  Query q = count_by({"loOrderpriority"});
  q.order_by = {{"count", true}};
  q.limit = 2;
  const ResultTable t = execute(q, lineorder_fixture_cube(), seeded_dataset());
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_GE(t.rows[0][1].as_int(), t.rows[1][1].as_int());
}

TEST(Engine, RejectsUnknownMembers) {
  EXPECT_EQ(kind_of_execute(count_by({"loColor"})), ErrorKind::NotFound);
  Query q = count_by({});
  q.measures = {"profit"};
  EXPECT_EQ(kind_of_execute(q), ErrorKind::NotFound);
  q = count_by({});
  q.cube = "Orders";
  EXPECT_EQ(kind_of_execute(q), ErrorKind::NotFound);
  q = count_by({"loShipmode"});
  q.order_by = {{"loTax", false}};
  EXPECT_EQ(kind_of_execute(q), ErrorKind::NotFound);
}

TEST(Engine, RejectsIllTypedFilters) {
  Query q = count_by({});
  q.filters.push_back({"loOrderdate", FilterOp::Gt, {std::string("yesterday")}});
  EXPECT_EQ(kind_of_execute(q), ErrorKind::Type);
  q.filters = {{"loShipmode", FilterOp::InDateRange, {std::string("a"), std::string("b")}}};
  EXPECT_EQ(kind_of_execute(q), ErrorKind::Type);
  q.filters = {{"loTax", FilterOp::Equals, {std::string("1.234")}}};
  EXPECT_EQ(kind_of_execute(q), ErrorKind::Type);
  q.filters = {{"loOrderdate", FilterOp::InDateRange,
                {std::string("1997-01-01"), std::string("1996-01-01")}}};
  EXPECT_EQ(kind_of_execute(q), ErrorKind::Validation);
}

TEST(Engine, RejectsMalformedShape) {
  Query q = count_by({});
  q.measures.clear();
  EXPECT_EQ(kind_of_execute(q), ErrorKind::Validation);
  q = count_by({});
  q.limit = 0;
  EXPECT_EQ(kind_of_execute(q), ErrorKind::Validation);
  q = count_by({});
  q.filters = {{"loShipmode", FilterOp::Equals, {}}};
  EXPECT_EQ(kind_of_execute(q), ErrorKind::Validation);
}

TEST(QueryDocument, RoundTripsThroughJson) {
  testing::RandomQueryGenerator gen(lineorder_fixture_cube(), seeded_dataset(), 5);
  for (int i = 0; i < 50; ++i) {
    const Query q = gen.next();
    EXPECT_EQ(query_from_json(query_to_json(q)), q);
  }
}

TEST(QueryDocument, RejectsUnknownKeysAndOperators) {
  EXPECT_THROW(parse_query(R"({"cube":"Lineorder","measures":["count"],"segments":[]})"), Error);
  EXPECT_THROW(parse_query(R"({"cube":"Lineorder","measures":["count"],
      "filters":[{"member":"loTax","operator":"like","values":["1"]}]})"),
               Error);
  EXPECT_THROW(parse_query(R"({"cube":"Lineorder","measures":["count"],
      "orderBy":[{"column":"count","direction":"up"}]})"),
               Error);
  EXPECT_THROW(parse_query(R"({"measures":["count"]})"), Error);
}

TEST(ResultJson, RendersDecimalsAsStrings) {
  Query q = count_by({});
  q.measures = {"loRevenue"};
  q.filters = {{"loOrderpriority", FilterOp::Equals, {std::string("URGENT")}}};
  const Json j = result_to_json(execute(q, lineorder_fixture_cube(), seeded_dataset()));
  ASSERT_EQ(j["rows"].size(), 1u);
  EXPECT_TRUE(j["rows"][0][0].is_string());
  EXPECT_EQ(j["header"][0]["name"], "loRevenue");
}

}  // namespace
}  // namespace cbi::query
