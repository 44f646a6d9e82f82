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

#include <filesystem>
#include <memory>
#include <string>

#include <unistd.h>

#include "cbi/cube/document.hpp"
#include "cbi/json_util.hpp"
#include "cbi/query/query.hpp"
#include "cbi/ssb/generator.hpp"

namespace cbi::testing {

inline std::filesystem::path fixture_path(const std::string& relative) {
  return std::filesystem::path(CBI_FIXTURE_DIR) / relative;
}

/// The desk-scale dataset every suite shares: seed 42, 10,000 fact rows.
inline const ssb::Dataset& seeded_dataset() {
  static const auto ds = std::make_shared<const ssb::Dataset>(ssb::generate_dataset({}));
  return *ds;
}

inline std::shared_ptr<const ssb::Dataset> seeded_dataset_ptr() {
  static const auto ds = std::make_shared<const ssb::Dataset>(ssb::generate_dataset({}));
  return ds;
}

/// A small dataset for the quadratic-cost oracle paths (joins).
inline const ssb::Dataset& small_dataset() {
  static const auto ds = [] {
    ssb::GeneratorConfig cfg;
    cfg.seed = 7;
    cfg.fact_rows = 1500;
    cfg.customers = 40;
    cfg.suppliers = 8;
    cfg.parts = 60;
    cfg.dates = 400;
    return std::make_shared<const ssb::Dataset>(ssb::generate_dataset(cfg));
  }();
  return *ds;
}

inline const cube::CubeSchema& lineorder_fixture_cube() {
  static const cube::CubeSchema cube =
      cube::parse_cube(read_file(fixture_path("lineorder.cube.json")));
  return cube;
}

inline const cube::CubeSchema& star_fixture_cube() {
  static const cube::CubeSchema cube =
      cube::parse_cube(read_file(fixture_path("lineorder_star.cube.json")));
  return cube;
}

inline query::Query fixture_query(const std::string& name) {
  return query::parse_query(read_file(fixture_path("queries/" + name + ".query.json")));
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static int counter = 0;
  auto dir = std::filesystem::temp_directory_path() /
             ("cbi-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace cbi::testing
