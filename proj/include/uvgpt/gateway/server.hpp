// Copyright 2026 The UVGPT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <memory>
#include <string>
#include <thread>

#include "uvgpt/gateway/gateway.hpp"

namespace httplib {
class Server;
}

namespace uvgpt {

/// POST /v1/process, POST /v1/label, GET /v1/health. Responses are JSON;
/// errors carry {"error": {...}} and, for failed executions, the trace.
class GatewayServer {
 public:
  explicit GatewayServer(std::shared_ptr<const Pipeline> pipeline);
  ~GatewayServer();

  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  /// Serves on a background thread; port 0 picks a free one.
  int start(int port = 0, const std::string& host = "127.0.0.1");
  void listen(int port, const std::string& host = "0.0.0.0");
  void stop();

  std::string url() const;

 private:
  std::shared_ptr<const Pipeline> pipeline_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::string host_;
  int port_ = 0;
};

}  // namespace uvgpt
