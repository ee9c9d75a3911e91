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


#include "uvgpt/gateway/server.hpp"

#include "httplib.h"

namespace uvgpt {

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

Json error_json(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

GatewayServer::GatewayServer(std::shared_ptr<const Pipeline> pipeline)
    : pipeline_(std::move(pipeline)), server_(std::make_unique<httplib::Server>()) {
  auto guarded = [this](auto&& body) {
    return [this, body](const httplib::Request& req, httplib::Response& res) {
      try {
        Json j;
        try {
          j = Json::parse(req.body);
        } catch (const Json::exception& e) {
          throw GatewayError(GatewayErrc::BadRequest, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) throw GatewayError(GatewayErrc::BadRequest, "expected a JSON object");
        reply(res, 200, body(j).manifest);
      } catch (const GatewayError& e) {
        reply(res, http_status(e.code()), e.body());
      } catch (const std::exception& e) {
        reply(res, 500, error_json("internal", e.what()));
      }
    };
  };
  server_->Post("/v1/process", guarded([this](const Json& j) {
                  return pipeline_->process(generalized_from_json(j));
                }));
  server_->Post("/v1/label", guarded([this](const Json& j) {
                  return pipeline_->label(specific_from_json(j));
                }));
  server_->Get("/v1/health", [this](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"status", "ok"}, {"models", pipeline_->registry().size()}});
  });
}

GatewayServer::~GatewayServer() { stop(); }

int GatewayServer::start(int port, const std::string& host) {
  host_ = host;
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
  } else {
    port_ = server_->bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void GatewayServer::listen(int port, const std::string& host) {
  host_ = host;
  port_ = port;
  if (!server_->listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void GatewayServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string GatewayServer::url() const {
  return "http://" + (host_ == "0.0.0.0" ? std::string("127.0.0.1") : host_) + ":" +
         std::to_string(port_);
}

}  // namespace uvgpt
