// interp/service/server.h

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

#ifndef INTERP_SERVICE_SERVER_H_
#define INTERP_SERVICE_SERVER_H_

#include <memory>
#include <string>

#include "interp/service/api.h"

namespace interp::service {

/// HTTP/1.1 transport for a Service. Requests are handled concurrently on
/// the transport's worker threads.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<const Service> service, std::string cors_origin);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns false when binding fails.
  bool Bind(const std::string& host, int port);
  int port() const { return port_; }

  /// Blocks until Stop() is called from another thread.
  void Serve();
  void Stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = -1;
};

}  // namespace interp::service

#endif  // INTERP_SERVICE_SERVER_H_
