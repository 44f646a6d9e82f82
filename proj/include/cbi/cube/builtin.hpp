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

#include <string_view>

#include "cbi/cube/document.hpp"

namespace cbi::cube {

/// The SSB order cube: a count measure, four summed price/quantity measures
/// and nine LINEORDER dimensions. Kept identical to
/// fixtures/lineorder.cube.json.
inline constexpr std::string_view kLineorderCubeDocument = R"json({
  "name": "Lineorder",
  "baseTable": "LINEORDER",
  "joins": [],
  "measures": {
    "count": {
      "type": "count",
      "drillMembers": ["loOrderdate", "loCommitdate", "loOrderpriority", "loShipmode"]
    },
    "loOrdtotalprice": {
      "type": "sum",
      "column": "lo_ordtotalprice",
      "format": "currency",
      "drillMembers": ["loOrderdate", "loCommitdate"]
    },
    "loExtendedprice": {
      "type": "sum",
      "column": "lo_extendedprice",
      "drillMembers": ["loOrderdate", "loCommitdate"]
    },
    "loQuantity": {
      "type": "sum",
      "column": "lo_quantity",
      "drillMembers": ["loOrderdate", "loCommitdate"]
    },
    "loRevenue": {
      "type": "sum",
      "column": "lo_revenue",
      "drillMembers": ["loOrderdate", "loCommitdate"]
    }
  },
  "dimensions": {
    "loLinenumber": { "type": "string", "column": "lo_linenumber" },
    "loOrderdate": { "type": "time", "column": "lo_orderdate" },
    "loCommitdate": { "type": "time", "column": "lo_commitdate" },
    "loOrderpriority": { "type": "string", "column": "lo_orderpriority" },
    "loShipmode": { "type": "string", "column": "lo_shipmode" },
    "loShippriority": { "type": "string", "column": "lo_shippriority" },
    "loDiscount": { "type": "number", "column": "lo_discount" },
    "loSupplycost": { "type": "number", "column": "lo_supplycost" },
    "loTax": { "type": "number", "column": "lo_tax" }
  },
  "dataSource": "default"
}
)json";

inline CubeSchema lineorder_cube() { return parse_cube(kLineorderCubeDocument); }

}  // namespace cbi::cube
