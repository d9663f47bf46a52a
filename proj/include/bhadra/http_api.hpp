// Copyright 2026 The Bhadra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <string>

#include "bhadra/error.hpp"
#include "bhadra/repository.hpp"

namespace bhadra {

/// HTTP status used for an Error of the given code.
int http_status(ErrorCode code);

/// JSON API under /api/v1 backed by a repository. The taxonomy endpoint
/// serves `taxonomy_document` verbatim.
///
///   GET    /api/v1/taxonomy
///   GET    /api/v1/attacks?technique=&adversary=&impact=&text=
///   GET    /api/v1/attacks/{id}
///   PUT    /api/v1/attacks/{id}   body: model, or {"expected_modified", "model"}
///   DELETE /api/v1/attacks/{id}
///   POST   /api/v1/compare        body: {"ids": [...], "palette": [...]?}
///   GET    /api/v1/stats
///
/// Failures carry {"code", "message", "findings"?}.
class ApiServer {
 public:
  ApiServer(Repository& repository, std::string taxonomy_document);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds and serves until stop(). Returns false if binding fails.
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string& host);
  /// Serves on a socket bound by bind_any_port(); blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bhadra
