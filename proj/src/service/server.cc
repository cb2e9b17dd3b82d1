// src/service/server.cc

// Copyright 2026 The interp Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "interp/service/server.h"

#include <sys/socket.h>

#include <httplib.h>

namespace interp::service {

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(std::shared_ptr<const Service> service,
                       std::string cors_origin)
    : impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;
  // SO_REUSEPORT (the library default) would let a second server share a
  // port that is already taken.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  auto handle = [service, cors_origin](const httplib::Request& req,
                                       httplib::Response& res) {
    const Response out = service->Handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_header("Access-Control-Allow-Origin", cors_origin);
    res.set_content(out.body, "application/json");
  };
  server.Get("/models", handle);
  server.Post("/predict", handle);
  server.Post("/interpret", handle);
  server.Post("/attack", handle);
  server.Options(R"(/.*)", [cors_origin](const httplib::Request&,
                                         httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", cors_origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  server.set_error_handler([cors_origin](const httplib::Request&,
                                         httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_header("Access-Control-Allow-Origin", cors_origin);
    res.set_content(res.status == 404 ? R"({"error":"not found"})"
                                      : R"({"error":"bad request"})",
                    "application/json");
  });
  // Uncaught exceptions never reach the client as text.
  server.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                  std::exception_ptr) {
    res.status = 500;
    res.set_content(R"({"error":"internal error"})", "application/json");
  });
}

HttpServer::~HttpServer() { Stop(); }

bool HttpServer::Bind(const std::string& host, int port) {
  if (port < 0 || port > 65535) return false;
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    port_ = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  return port_ > 0;
}

void HttpServer::Serve() { impl_->server.listen_after_bind(); }

void HttpServer::Stop() {
  if (impl_) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace interp::service
