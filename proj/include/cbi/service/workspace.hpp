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

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cbi/collab/annotation.hpp"
#include "cbi/collab/session.hpp"
#include "cbi/collab/store.hpp"
#include "cbi/cube/builtin.hpp"
#include "cbi/cube/document.hpp"
#include "cbi/cube/validate.hpp"
#include "cbi/dashboard/dashboard.hpp"
#include "cbi/dashboard/export.hpp"
#include "cbi/io/atomic_file.hpp"
#include "cbi/kb/ntriples.hpp"
#include "cbi/query/engine.hpp"
#include "cbi/service/config.hpp"
#include "cbi/ssb/csv.hpp"
#include "cbi/ssb/generator.hpp"

namespace cbi::service {

inline constexpr std::string_view kKbFile = "cbiont.nt";
inline constexpr std::string_view kDashboardFile = "dashboard.json";
inline constexpr std::string_view kDataSubdir = "data";
inline constexpr std::string_view kCubeSuffix = ".cube.json";

/// Everything a running service owns: dataset, cubes, knowledge base,
/// managers and dashboard, plus the state files under the data directory.
/// The shared mutex linearizes writes against reads at service scope.
class Workspace {
 public:
  /// Loads state from `cfg.data_dir`. Startup errors name the file.
  explicit Workspace(const ServiceConfig& cfg, collab::Clock clock = system_now)
      : data_dir_(cfg.data_dir),
        sessions_(store_),
        annotations_(store_, sessions_),
        dashboard_(store_.minter, [this](const query::Query& q) { run(q); }, clock) {
    store_.clock = std::move(clock);
    check_data_dir();
    load_dataset(cfg.generator, cfg.delimiter);
    load_cubes();
    load_kb();
    load_dashboard();
  }

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  const std::filesystem::path& data_dir() const noexcept { return data_dir_; }
  const ssb::Dataset& dataset() const noexcept { return *dataset_; }
  const std::vector<cube::CubeSchema>& cubes() const noexcept { return cubes_; }

  const cube::CubeSchema& cube(std::string_view name) const {
    for (const auto& c : cubes_) {
      if (c.name == name) return c;
    }
    fail(ErrorKind::NotFound, "unknown cube '" + std::string(name) + "'");
  }

  query::ResultTable run(const query::Query& q) const {
    query::check_shape(q);
    return query::execute(q, cube(q.cube), *dataset_);
  }

  collab::CollabStore& store() noexcept { return store_; }
  const kb::KnowledgeBase& kb() const noexcept { return store_.kb; }
  collab::SessionHandler& sessions() noexcept { return sessions_; }
  collab::AnnotationManager& annotations() noexcept { return annotations_; }
  dashboard::Dashboard& board() noexcept { return dashboard_; }
  const dashboard::Dashboard& board() const noexcept { return dashboard_; }
  Timestamp now() const { return store_.clock(); }

  std::shared_mutex& mutex() const noexcept { return mutex_; }

  dashboard::ExportDocument export_document() const {
    return dashboard::export_dashboard(dashboard_, annotations_, sessions_, now());
  }

  std::vector<std::string> import_document(const dashboard::ExportDocument& doc) {
    return dashboard::import_dashboard(doc, dashboard_, sessions_, annotations_,
                                       [this](const query::Query& q) { run(q); }, now());
  }

  /// Rewrites both state files, each by atomic replace.
  void checkpoint() const {
    io::write_file_atomic(data_dir_ / kKbFile, kb::serialize_kb(store_.kb));
    io::write_file_atomic(data_dir_ / kDashboardFile, dashboard_.serialize());
  }

 private:
  void check_data_dir() const {
    std::error_code ec;
    if (!std::filesystem::is_directory(data_dir_, ec)) {
      fail(ErrorKind::Io, "data directory " + data_dir_.string() + " does not exist");
    }
    if (::access(data_dir_.c_str(), W_OK) != 0) {
      fail(ErrorKind::Io, "data directory " + data_dir_.string() + " is not writable");
    }
  }

  void load_dataset(const ssb::GeneratorConfig& gen, char delimiter) {
    const auto dir = data_dir_ / kDataSubdir;
    if (std::filesystem::exists(ssb::table_file(dir, ssb::kLineorder))) {
      dataset_ = std::make_shared<const ssb::Dataset>(ssb::load_dataset(dir, delimiter));
    } else {
      dataset_ = std::make_shared<const ssb::Dataset>(ssb::generate_dataset(gen));
    }
  }

  // Every `*.cube.json` in the data directory, by file name; the built-in
  // Lineorder cube when there is none.
  void load_cubes() {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(data_dir_)) {
      const std::string name = e.path().filename().string();
      if (e.is_regular_file() && name.size() > kCubeSuffix.size() &&
          name.compare(name.size() - kCubeSuffix.size(), kCubeSuffix.size(), kCubeSuffix) == 0) {
        files.push_back(e.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      cube::CubeSchema c;
      try {
        c = cube::parse_cube(read_file(f));
      } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), f.string());
      } catch (const Error& e) {
        throw Error(e.kind(), f.string() + ": " + e.what());
      }
      for (const auto& d : cube::validate_cube(c, *dataset_)) {
        if (d.severity == cube::Diagnostic::Severity::Error) {
          fail(ErrorKind::Schema, f.string() + ": " + (d.member.empty() ? "" : d.member + ": ") + d.message);
        }
      }
      if (std::any_of(cubes_.begin(), cubes_.end(), [&](const auto& x) { return x.name == c.name; })) {
        fail(ErrorKind::Schema, f.string() + ": cube '" + c.name + "' is defined twice");
      }
      cubes_.push_back(std::move(c));
    }
    if (cubes_.empty()) cubes_.push_back(cube::lineorder_cube());
  }

  void load_kb() {
    const auto path = data_dir_ / kKbFile;
    if (!std::filesystem::exists(path)) return;
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read " + path.string());
    try {
      kb::parse_kb_into(in, store_.kb);
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.detail(), path.string());
    }
    store_.minter.observe(store_.kb);
  }

  void load_dashboard() {
    const auto path = data_dir_ / kDashboardFile;
    if (!std::filesystem::exists(path)) return;
    try {
      dashboard_.load(parse_json(read_file(path), "dashboard"));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.detail(), path.string());
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ": " + e.what());
    }
  }

  std::filesystem::path data_dir_;
  std::shared_ptr<const ssb::Dataset> dataset_;
  std::vector<cube::CubeSchema> cubes_;
  collab::CollabStore store_;
  collab::SessionHandler sessions_;
  collab::AnnotationManager annotations_;
  dashboard::Dashboard dashboard_;
  mutable std::shared_mutex mutex_;
};

}  // namespace cbi::service
