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

#include <httplib.h>

#include <cctype>
#include <string>

#include "cbi/error.hpp"
#include "cbi/service/config.hpp"
#include "cbi/service/service.hpp"

namespace cbi::service {

/// Binds a Service to an httplib server. Every method and path is
/// forwarded to Service::dispatch; the body is always JSON.
class HttpServer {
 public:
  explicit HttpServer(Service& service) : service_(service) {
    // SO_REUSEADDR only: a second server on a taken port must fail to bind.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    const auto handler = [this](const httplib::Request& in, httplib::Response& out) {
      Request req;
      req.method = in.method;
      req.path = in.path;
      req.params = {in.params.begin(), in.params.end()};
      for (const auto& [k, v] : in.headers) {
        std::string key = k;
        for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        req.headers[key] = v;
      }
      req.body = in.body;
      const Response r = service_.dispatch(req);
      out.status = r.status;
      for (const auto& [k, v] : r.headers) out.set_header(k, v);
      out.set_content(r.text(), "application/json");
    };
    server_.Get(".*", handler);
    server_.Post(".*", handler);
    server_.Patch(".*", handler);
    server_.Delete(".*", handler);
    server_.Put(".*", handler);
  }

  /// Binds `address`; returns the bound port. Throws Io when the port is
  /// taken or the host does not resolve.
  int bind(const ListenAddress& address) {
    int port = address.port;
    if (port == 0) {
      port = server_.bind_to_any_port(address.host);
    } else if (!server_.bind_to_port(address.host, port)) {
      port = -1;
    }
    if (port < 0) {
      fail(ErrorKind::Io, "cannot bind " + address.host + ":" + std::to_string(address.port));
    }
    return port;
  }

  /// Serves until stop(); call after bind().
  void serve() { server_.listen_after_bind(); }
  void stop() { server_.stop(); }
  bool running() const { return server_.is_running(); }
  void wait_until_ready() const { server_.wait_until_ready(); }

 private:
  Service& service_;
  httplib::Server server_;
};

}  // namespace cbi::service
