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
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cbi/error.hpp"
#include "cbi/json_util.hpp"
#include "cbi/query/result.hpp"
#include "cbi/service/wire.hpp"
#include "cbi/service/workspace.hpp"

namespace cbi::service {

struct Request {
  std::string method;
  std::string path;  // already percent-decoded
  std::multimap<std::string, std::string> params;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;

  std::optional<std::string> param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) return std::nullopt;
    return it->second;
  }
};

struct Response {
  int status = 200;
  Json body = Json::object();
  std::map<std::string, std::string> headers;

  std::string text() const { return body.dump(); }
};

/// HTTP status for an error kind.
inline int status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Authentication: return 401;
    case ErrorKind::Authorization: return 403;
    case ErrorKind::NotFound: return 404;
    case ErrorKind::State:
    case ErrorKind::Integrity: return 409;
    case ErrorKind::Io:
    case ErrorKind::Internal: return 500;
    default: return 400;
  }
}

inline Response error_response(const Error& e) {
  Response r;
  r.status = status_of(e.kind());
  Json err = Json::object();
  err["kind"] = std::string(to_string(e.kind()));
  err["message"] = r.status == 500 ? std::string("internal error") : std::string(e.what());
  if (const auto* p = dynamic_cast<const ParseError*>(&e); p && p->line() > 0) err["line"] = p->line();
  r.body = Json{{"error", err}};
  return r;
}

/// Route table over a Workspace. Reads share the workspace lock; writes
/// hold it exclusively and checkpoint both state files before replying.
class Service {
 public:
  Service(Workspace& ws, std::optional<std::string> token) : ws_(ws), token_(std::move(token)) {
    if (token_ && token_->empty()) token_.reset();
  }

  Response dispatch(const Request& req) noexcept {
    try {
      return route(req);
    } catch (const Error& e) {
      return error_response(e);
    } catch (const std::exception&) {
      return error_response(Error(ErrorKind::Internal, "unexpected failure"));
    }
  }

 private:
  using Segments = std::vector<std::string>;

  static Segments split(const std::string& path) {
    Segments out;
    std::size_t i = 0;
    while (i <= path.size()) {
      const auto j = path.find('/', i);
      const auto part = path.substr(i, j == std::string::npos ? std::string::npos : j - i);
      if (!part.empty()) out.push_back(part);
      if (j == std::string::npos) break;
      i = j + 1;
    }
    return out;
  }

  [[noreturn]] static void no_route(const Request& req) {
    fail(ErrorKind::NotFound, "no route for " + req.method + " " + req.path);
  }

  static Response method_not_allowed(const Request& req) {
    Response r;
    r.status = 405;
    r.body = Json{{"error", Json{{"kind", "method-not-allowed"},
                                 {"message", req.method + " is not supported on " + req.path}}}};
    return r;
  }

  void authenticate(const Request& req) const {
    if (!token_) return;
    auto it = req.headers.find("authorization");
    if (it == req.headers.end()) fail(ErrorKind::Authentication, "missing bearer token");
    if (it->second != "Bearer " + *token_) fail(ErrorKind::Authentication, "invalid bearer token");
  }

  static Json body_of(const Request& req) { return parse_json(req.body, "request"); }

  static Response ok(Json body, int status = 200) {
    Response r;
    r.status = status;
    r.body = std::move(body);
    return r;
  }

  template <typename F>
  Response read(F&& f) {
    std::shared_lock lock(ws_.mutex());
    return f();
  }

  template <typename F>
  Response write(F&& f) {
    std::unique_lock lock(ws_.mutex());
    Response r = f();
    ws_.checkpoint();
    return r;
  }

  Json annotation_json(const collab::AnnotationView& a) const {
    return wire::annotation_to_json(a, ws_.sessions().person_name(a.author));
  }

  Response route(const Request& req) {
    const Segments s = split(req.path);
    if (s.empty() || s[0] != "api") no_route(req);
    const std::string& m = req.method;
    if (s.size() == 2 && s[1] == "health") {
      if (m != "GET") return method_not_allowed(req);
      return read([&] {
        return ok(Json{{"status", "ok"},
                       {"cubes", ws_.cubes().size()},
                       {"items", ws_.board().size()},
                       {"triples", ws_.kb().size()}});
      });
    }
    authenticate(req);
    if (s.size() < 2) no_route(req);
    const std::string& area = s[1];
    if (area == "meta") return meta(req, s);
    if (area == "query" && s.size() == 2) {
      if (m != "POST") return method_not_allowed(req);
      const query::Query q = query::query_from_json(body_of(req));
      return read([&] { return ok(query::result_to_json(ws_.run(q))); });
    }
    if (area == "sessions") return sessions(req, s);
    if (area == "annotations") return annotations(req, s);
    if (area == "dashboard") return dashboard(req, s);
    if (area == "export" && s.size() == 2) {
      if (m != "GET") return method_not_allowed(req);
      return read([&] {
        const auto doc = ws_.export_document();
        Response r = ok(dashboard::export_to_json(doc));
        std::string stamp = format_timestamp(doc.exported_at);
        stamp.erase(std::remove_if(stamp.begin(), stamp.end(), [](char c) { return c == '-' || c == ':'; }),
                    stamp.end());
        r.headers["Content-Disposition"] = "attachment; filename=\"cbi-export-" + stamp + ".json\"";
        return r;
      });
    }
    if (area == "import" && s.size() == 2) {
      if (m != "POST") return method_not_allowed(req);
      const auto doc = dashboard::export_from_json(body_of(req));
      return write([&] { return ok(Json{{"items", ws_.import_document(doc)}}, 201); });
    }
    no_route(req);
  }

  Response meta(const Request& req, const Segments& s) {
    if (req.method != "GET") return method_not_allowed(req);
    if (s.size() == 3 && s[2] == "cubes") {
      return read([&] {
        Json cubes = Json::array();
        for (const auto& c : ws_.cubes()) cubes.push_back(cube::cube_to_json(c));
        return ok(Json{{"cubes", cubes}});
      });
    }
    if (s.size() == 5 && s[2] == "cubes" && s[4] == "members") {
      return read([&] { return ok(wire::members_to_json(ws_.cube(s[3]))); });
    }
    no_route(req);
  }

  Response sessions(const Request& req, const Segments& s) {
    const std::string& m = req.method;
    if (s.size() == 2) {
      if (m != "POST") return method_not_allowed(req);
      const Json body = body_of(req);
      json_fields::object_of(body, "session request");
      json_fields::reject_unknown(body, {"participants", "location", "start"}, "session request");
      std::vector<collab::UserProfile> profiles;
      for (const auto& p : json_fields::array_of(json_fields::require(body, "participants", "session request"),
                                                 "participants")) {
        profiles.push_back(wire::profile_from_json(p));
      }
      const auto location = wire::location_from_json(json_fields::require(body, "location", "session request"));
      const auto start = wire::optional_timestamp(body, "start");
      return write([&] {
        const auto id = ws_.sessions().open_session(profiles, location, start.value_or(ws_.now()));
        return ok(wire::session_to_json(ws_.sessions().session_info(id)), 201);
      });
    }
    if (s.size() == 3) {
      if (m != "GET") return method_not_allowed(req);
      return read([&] { return ok(wire::session_to_json(ws_.sessions().session_info(s[2]))); });
    }
    if (s.size() == 4 && s[3] == "close") {
      if (m != "POST") return method_not_allowed(req);
      std::optional<Timestamp> end;
      if (!req.body.empty()) {
        const Json body = body_of(req);
        json_fields::object_of(body, "close request");
        json_fields::reject_unknown(body, {"end"}, "close request");
        end = wire::optional_timestamp(body, "end");
      }
      return write([&] {
        return ok(wire::session_to_json(ws_.sessions().close_session(s[2], end.value_or(ws_.now()))));
      });
    }
    no_route(req);
  }

  void check_target(const collab::Target& t) const {
    if (const auto* c = std::get_if<collab::CubeTarget>(&t)) {
      ws_.cube(c->cube);
    } else if (const auto* i = std::get_if<collab::ItemTarget>(&t)) {
      if (!ws_.board().contains(i->item)) fail(ErrorKind::NotFound, "unknown dashboard item " + i->item);
    } else {
      ws_.run(std::get<collab::QueryTarget>(t).query);
    }
  }

  Response annotations(const Request& req, const Segments& s) {
    const std::string& m = req.method;
    if (s.size() == 2) {
      if (m == "GET") {
        const auto target = req.param("target");
        if (!target) fail(ErrorKind::Validation, "GET /api/annotations needs a target parameter");
        const auto session = req.param("session");
        return read([&] {
          Json list = Json::array();
          for (const auto& a : ws_.annotations().enlist(*target, session)) list.push_back(annotation_json(a));
          return ok(Json{{"annotations", list}});
        });
      }
      if (m != "POST") return method_not_allowed(req);
      const auto a = wire::new_annotation_from_json(body_of(req));
      return write([&] {
        check_target(a.target);
        const auto id = ws_.annotations().add(a);
        return ok(annotation_json(ws_.annotations().get(id)), 201);
      });
    }
    if (s.size() != 3) no_route(req);
    const std::string& id = s[2];
    if (m == "GET") return read([&] { return ok(annotation_json(ws_.annotations().get(id))); });
    if (m == "PATCH") {
      const Json body = body_of(req);
      json_fields::object_of(body, "annotation edit");
      json_fields::reject_unknown(body, {"body", "editor"}, "annotation edit");
      const auto text = json_fields::string_of(json_fields::require(body, "body", "annotation edit"), "body");
      const auto editor = json_fields::string_of(json_fields::require(body, "editor", "annotation edit"), "editor");
      return write([&] { return ok(annotation_json(ws_.annotations().edit(id, text, editor))); });
    }
    if (m == "DELETE") {
      std::optional<std::string> requester = req.param("requester");
      if (!requester && !req.body.empty()) {
        const Json body = body_of(req);
        json_fields::object_of(body, "annotation delete");
        json_fields::reject_unknown(body, {"requester"}, "annotation delete");
        requester = wire::optional_string(body, "requester", "annotation delete");
      }
      if (!requester) fail(ErrorKind::Validation, "DELETE needs a requester");
      return write([&] {
        ws_.annotations().remove(id, *requester);
        return ok(Json{{"deleted", id}});
      });
    }
    return method_not_allowed(req);
  }

  Response dashboard(const Request& req, const Segments& s) {
    const std::string& m = req.method;
    if (s.size() == 2) {
      if (m == "GET") {
        return read([&] {
          Json items = Json::array();
          for (const auto& i : ws_.board().items()) items.push_back(dashboard::item_to_json(i));
          return ok(Json{{"items", items}});
        });
      }
      if (m != "POST") return method_not_allowed(req);
      const auto n = wire::new_item_from_json(body_of(req));
      return write([&] {
        for (const auto& ref : n.comment_refs) ws_.annotations().get(ref);
        const auto id = ws_.board().add_item(n);
        return ok(dashboard::item_to_json(ws_.board().get(id)), 201);
      });
    }
    if (s.size() != 3) no_route(req);
    const std::string& id = s[2];
    if (m == "GET") return read([&] { return ok(dashboard::item_to_json(ws_.board().get(id))); });
    if (m == "PATCH") {
      const auto u = wire::item_update_from_json(body_of(req));
      return write([&] { return ok(dashboard::item_to_json(ws_.board().update_item(id, u))); });
    }
    if (m == "DELETE") {
      return write([&] {
        ws_.board().delete_item(id);
        return ok(Json{{"deleted", id}});
      });
    }
    return method_not_allowed(req);
  }

  Workspace& ws_;
  std::optional<std::string> token_;
};

}  // namespace cbi::service
