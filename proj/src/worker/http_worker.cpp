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

#include "uvgpt/worker/http_worker.hpp"

#include "httplib.h"

namespace uvgpt {

namespace {

WorkerErrc transport_errc(httplib::Error e) {
  switch (e) {
    case httplib::Error::Read:
    case httplib::Error::ConnectionTimeout:
      return WorkerErrc::Timeout;
    default:
      return WorkerErrc::Unreachable;
  }
}

WorkerErrc errc_from_string(const std::string& s) {
  for (auto c : {WorkerErrc::Unreachable, WorkerErrc::Timeout, WorkerErrc::MalformedResponse,
                 WorkerErrc::DescriptorMismatch, WorkerErrc::MaskFrameMismatch,
                 WorkerErrc::BadRequest}) {
    if (to_string(c) == s) return c;
  }
  return WorkerErrc::MalformedResponse;
}

Json parse_reply(const httplib::Result& res, const std::string& what) {
  if (!res) {
    throw WorkerError(transport_errc(res.error()), what + ": " + httplib::to_string(res.error()));
  }
  Json body;
  try {
    body = Json::parse(res->body);
  } catch (const Json::exception& e) {
    throw WorkerError(WorkerErrc::MalformedResponse, what + ": " + e.what());
  }
  if (res->status != 200) {
    if (body.contains("error")) {
      const auto& err = body["error"];
      throw WorkerError(errc_from_string(err.value("code", std::string{})),
                        what + ": " + err.value("message", std::string{}));
    }
    throw WorkerError(WorkerErrc::MalformedResponse,
                      what + ": HTTP " + std::to_string(res->status));
  }
  return body;
}

template <typename T>
T decode(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const std::exception& e) {
    throw WorkerError(WorkerErrc::MalformedResponse, what + ": " + e.what());
  }
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

HttpWorker::HttpWorker(WorkerEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

Json HttpWorker::get(const std::string& path) {
  httplib::Client client(endpoint_.base_url);
  client.set_connection_timeout(std::chrono::milliseconds(endpoint_.timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(endpoint_.timeout_ms));
  return parse_reply(client.Get(path), endpoint_.name + " GET " + path);
}

Json HttpWorker::post(const std::string& path, const Json& body) {
  httplib::Client client(endpoint_.base_url);
  client.set_connection_timeout(std::chrono::milliseconds(endpoint_.timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(endpoint_.timeout_ms));
  client.set_write_timeout(std::chrono::milliseconds(endpoint_.timeout_ms));
  return parse_reply(client.Post(path, body.dump(), "application/json"),
                     endpoint_.name + " POST " + path);
}

ModelDescriptor HttpWorker::capabilities() {
  return decode<ModelDescriptor>(get("/v1/capabilities"), endpoint_.name + " capabilities");
}

DetectResponse HttpWorker::detect(const DetectRequest& request) {
  return decode<DetectResponse>(post("/v1/detect", request), endpoint_.name + " detect");
}

SegmentResponse HttpWorker::segment(const SegmentRequest& request) {
  auto response = decode<SegmentResponse>(post("/v1/segment", request), endpoint_.name + " segment");
  validate_mask_frames(request, response);
  return response;
}

WorkerServer::WorkerServer(std::shared_ptr<WorkerBackend> backend)
    : backend_(std::move(backend)), server_(std::make_unique<httplib::Server>()) {
  auto guarded = [this](auto&& body) {
    return [this, body](const httplib::Request& req, httplib::Response& res) {
      try {
        reply(res, 200, body(req));
      } catch (const WorkerError& e) {
        const int status = e.code() == WorkerErrc::BadRequest ? 400 : 500;
        reply(res, status, error_body(e.code(), e.what()));
      } catch (const Json::exception& e) {
        reply(res, 400, error_body(WorkerErrc::BadRequest, e.what()));
      } catch (const std::exception& e) {
        reply(res, 500, error_body(WorkerErrc::MalformedResponse, e.what()));
      }
    };
  };
  server_->Get("/v1/capabilities",
               guarded([this](const httplib::Request&) { return Json(backend_->capabilities()); }));
  server_->Post("/v1/detect", guarded([this](const httplib::Request& req) {
                  return Json(backend_->detect(Json::parse(req.body).get<DetectRequest>()));
                }));
  server_->Post("/v1/segment", guarded([this](const httplib::Request& req) {
                  return Json(backend_->segment(Json::parse(req.body).get<SegmentRequest>()));
                }));
}

WorkerServer::~WorkerServer() { stop(); }

int WorkerServer::start(int port, const std::string& host) {
  host_ = host;
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    if (!server_->bind_to_port(host, port)) {
      throw WorkerError(WorkerErrc::Unreachable, "cannot bind " + host + ":" + std::to_string(port));
    }
    port_ = port;
  }
  if (port_ <= 0) throw WorkerError(WorkerErrc::Unreachable, "cannot bind " + host);
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void WorkerServer::listen(int port, const std::string& host) {
  host_ = host;
  port_ = port;
  if (!server_->listen(host, port)) {
    throw WorkerError(WorkerErrc::Unreachable, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void WorkerServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string WorkerServer::url() const {
  return "http://" + (host_ == "0.0.0.0" ? std::string("127.0.0.1") : host_) + ":" +
         std::to_string(port_);
}

}  // namespace uvgpt
