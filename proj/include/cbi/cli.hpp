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

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>

#include "cbi/cube/builtin.hpp"
#include "cbi/cube/document.hpp"
#include "cbi/cube/validate.hpp"
#include "cbi/dashboard/export.hpp"
#include "cbi/error.hpp"
#include "cbi/io/atomic_file.hpp"
#include "cbi/json_util.hpp"
#include "cbi/query/engine.hpp"
#include "cbi/query/result.hpp"
#include "cbi/service/config.hpp"
#include "cbi/service/http.hpp"
#include "cbi/service/service.hpp"
#include "cbi/service/workspace.hpp"
#include "cbi/ssb/csv.hpp"
#include "cbi/ssb/generator.hpp"

// Command line front end: generate, serve, query, export.
// Exit codes: 0 success, 1 usage error, 2 execution error.

namespace cbi::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

namespace detail {

struct GeneratorFlags {
  std::optional<uint64_t> seed;
  std::optional<int64_t> fact_rows, customers, suppliers, parts, dates;

  void attach(CLI::App& app) {
    app.add_option("--seed", seed, "Generator seed");
    app.add_option("--fact-rows", fact_rows, "Lineorder rows")->check(CLI::PositiveNumber);
    app.add_option("--customers", customers, "Customer rows")->check(CLI::PositiveNumber);
    app.add_option("--suppliers", suppliers, "Supplier rows")->check(CLI::PositiveNumber);
    app.add_option("--parts", parts, "Part rows")->check(CLI::PositiveNumber);
    app.add_option("--dates", dates, "Date rows")->check(CLI::PositiveNumber);
  }

  void apply(ssb::GeneratorConfig& g) const {
    if (seed) g.seed = *seed;
    if (fact_rows) g.fact_rows = *fact_rows;
    if (customers) g.customers = *customers;
    if (suppliers) g.suppliers = *suppliers;
    if (parts) g.parts = *parts;
    if (dates) g.dates = *dates;
  }
};

inline std::string compact_stamp(Timestamp t) {
  std::string s = format_timestamp(t);
  std::erase_if(s, [](char c) { return c == '-' || c == ':'; });
  return s;
}

// Blocks SIGINT and SIGTERM for the calling thread and every thread it
// spawns, then stops the server from a watcher thread on delivery.
inline void serve_until_signalled(service::HttpServer& server) {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&set, &sig);
    server.stop();
  });
  server.serve();
  if (watcher.joinable()) {
    // serve() can also return on its own; wake the watcher in that case.
    pthread_kill(watcher.native_handle(), SIGTERM);
    watcher.join();
  }
}

}  // namespace detail

/// Runs one command line. `args` excludes the program name.
inline int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Collaborative BI platform", "cbi"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string delimiter = std::string(1, ssb::kDefaultDelimiter);

  auto* gen = app.add_subcommand("generate", "Write a seeded SSB dataset as CSV files");
  std::filesystem::path gen_out;
  detail::GeneratorFlags gen_flags;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--delimiter", delimiter, "CSV delimiter");
  gen_flags.attach(*gen);

  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  std::optional<std::filesystem::path> serve_config, serve_dir;
  std::optional<std::string> serve_listen, serve_token, serve_delimiter;
  serve->add_option("--config", serve_config, "Config file (key = value)")->check(CLI::ExistingFile);
  serve->add_option("--data-dir", serve_dir, "State directory");
  serve->add_option("--listen", serve_listen, "host:port");
  serve->add_option("--token", serve_token, "Shared bearer token");
  serve->add_option("--delimiter", serve_delimiter, "CSV delimiter for data/*.csv");

  auto* query = app.add_subcommand("query", "Execute a query document and print the result");
  std::filesystem::path query_file;
  std::optional<std::filesystem::path> query_data, query_cube;
  std::string query_format = "table";
  detail::GeneratorFlags query_flags;
  query->add_option("--file", query_file, "Query document")->required()->check(CLI::ExistingFile);
  query->add_option("--data", query_data, "Dataset directory of CSV files (default: generate)")
      ->check(CLI::ExistingDirectory);
  query->add_option("--cube", query_cube, "Cube document (default: built-in Lineorder)")
      ->check(CLI::ExistingFile);
  query->add_option("--format", query_format, "Output format")->check(CLI::IsMember({"table", "json"}));
  query->add_option("--delimiter", delimiter, "CSV delimiter");
  query_flags.attach(*query);

  auto* exp = app.add_subcommand("export", "Write the dashboard export document");
  std::optional<std::filesystem::path> exp_config, exp_dir, exp_out;
  exp->add_option("--config", exp_config, "Config file (key = value)")->check(CLI::ExistingFile);
  exp->add_option("--data-dir", exp_dir, "State directory");
  exp->add_option("--out", exp_out, "Output file, '-' for stdout (default: cbi-export-<time>.json)");

  if (!args.empty() && !args[0].empty() && args[0][0] != '-' && app.get_subcommand_no_throw(args[0]) == nullptr) {
    err << "cbi: unknown subcommand '" << args[0] << "'\n\n" << app.help();
    return kExitUsage;
  }
  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "cbi: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const auto service_config = [&](const std::optional<std::filesystem::path>& file,
                                  const std::optional<std::filesystem::path>& dir) {
    service::ServiceConfig cfg;
    if (file) cfg = service::load_config(*file);
    service::apply_env(cfg);
    if (dir) cfg.data_dir = *dir;
    return cfg;
  };

  try {
    if (*gen) {
      ssb::GeneratorConfig cfg;
      gen_flags.apply(cfg);
      const char delim = service::parse_delimiter(delimiter);
      const auto ds = ssb::generate_dataset(cfg);
      ssb::write_dataset(ds, gen_out, delim);
      out << "wrote " << ds.table(ssb::kLineorder).row_count() << " lineorder rows to "
          << gen_out.string() << "\n";
      return kExitOk;
    }
    if (*query) {
      const char delim = service::parse_delimiter(delimiter);
      const query::Query q = query::parse_query(read_file(query_file));
      ssb::Dataset ds = [&] {
        if (query_data) return ssb::load_dataset(*query_data, delim);
        ssb::GeneratorConfig cfg;
        query_flags.apply(cfg);
        return ssb::generate_dataset(cfg);
      }();
      const cube::CubeSchema c = query_cube ? cube::parse_cube(read_file(*query_cube)) : cube::lineorder_cube();
      for (const auto& d : cube::validate_cube(c, ds)) {
        if (d.severity == cube::Diagnostic::Severity::Error) {
          fail(ErrorKind::Schema, (d.member.empty() ? "" : d.member + ": ") + d.message);
        }
      }
      if (q.cube != c.name) fail(ErrorKind::NotFound, "unknown cube '" + q.cube + "'");
      const auto result = query::execute(q, c, ds);
      if (query_format == "json") {
        out << query::result_to_json(result).dump(2) << "\n";
      } else {
        query::print_table(result, out);
      }
      return kExitOk;
    }
    if (*exp) {
      const auto cfg = service_config(exp_config, exp_dir);
      service::Workspace ws(cfg);
      const auto doc = ws.export_document();
      const std::string text = dashboard::serialize_export(doc);
      if (exp_out && exp_out->string() == "-") {
        out << text;
        return kExitOk;
      }
      const auto path =
          exp_out ? *exp_out : std::filesystem::path("cbi-export-" + detail::compact_stamp(doc.exported_at) + ".json");
      io::write_file_atomic(path, text);
      out << "exported " << doc.items.size() << " items to " << path.string() << "\n";
      return kExitOk;
    }
    if (*serve) {
      auto cfg = service_config(serve_config, serve_dir);
      if (serve_listen) cfg.listen = *serve_listen;
      if (serve_token) cfg.token = *serve_token;
      if (serve_delimiter) cfg.delimiter = service::parse_delimiter(*serve_delimiter);
      const auto address = service::parse_listen(cfg.listen);
      service::Workspace ws(cfg);
      service::Service svc(ws, cfg.token);
      service::HttpServer server(svc);
      const int port = server.bind(address);
      out << "listening on " << address.host << ":" << port << std::endl;
      detail::serve_until_signalled(server);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "cbi: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "cbi: " << e.what() << "\n";
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace cbi::cli
