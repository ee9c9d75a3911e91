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

#include "uvgpt/worker/backend.hpp"

namespace httplib {
class Server;
}

namespace uvgpt {

struct WorkerEndpoint {
  std::string name;
  std::string base_url;  // "http://host:port"
  int timeout_ms = 5000;
};

/// Worker reached over the JSON/HTTP protocol.
class HttpWorker final : public WorkerBackend {
 public:
  explicit HttpWorker(WorkerEndpoint endpoint);

  std::string name() const override { return endpoint_.name; }
  ModelDescriptor capabilities() override;
  DetectResponse detect(const DetectRequest& request) override;
  SegmentResponse segment(const SegmentRequest& request) override;

  const WorkerEndpoint& endpoint() const noexcept { return endpoint_; }

 private:
  Json get(const std::string& path);
  Json post(const std::string& path, const Json& body);

  WorkerEndpoint endpoint_;
};

/// Serves any backend over the worker protocol on 127.0.0.1. Used to run
/// mock workers out of process and to exercise HttpWorker in tests.
class WorkerServer {
 public:
  explicit WorkerServer(std::shared_ptr<WorkerBackend> backend);
  ~WorkerServer();

  WorkerServer(const WorkerServer&) = delete;
  WorkerServer& operator=(const WorkerServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  /// Returns the bound port.
  int start(int port = 0, const std::string& host = "127.0.0.1");
  /// Blocks serving on the calling thread.
  void listen(int port, const std::string& host = "0.0.0.0");
  void stop();

  std::string url() const;

 private:
  std::shared_ptr<WorkerBackend> backend_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::string host_;
  int port_ = 0;
};

}  // namespace uvgpt
