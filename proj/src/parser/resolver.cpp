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

#include "uvgpt/parser/resolver.hpp"

#include <stdexcept>

#include "httplib.h"

namespace uvgpt {

TableResolver::TableResolver(Ontology ontology) : ontology_(std::move(ontology)) {}

std::optional<TargetSpec> TableResolver::resolve(std::string_view phrase) const {
  const auto label = normalize_label(phrase);
  if (ontology_.contains(label)) return TargetSpec::category(label);
  return TargetSpec::named(label);
}

std::set<std::string> TableResolver::expand(std::string_view category) const {
  const auto it = ontology_.find(normalize_label(category));
  return it == ontology_.end() ? std::set<std::string>{} : it->second;
}

const Ontology& default_ontology() {
  static const Ontology kOntology = {
      {"animal",
       {"dog", "cat", "frog", "bird", "sheep", "horse", "cow", "elephant", "zebra", "giraffe",
        "bear"}},
      {"building", {"tower", "house", "bridge-tower"}},
  };
  return kOntology;
}

std::shared_ptr<const SemanticResolver> default_resolver() {
  static const auto kResolver = std::make_shared<const TableResolver>(default_ontology());
  return kResolver;
}

Json resolver_request_json(std::string_view phrase) { return {{"phrase", std::string(phrase)}}; }

ResolverReply resolver_reply_from_json(const Json& j) {
  ResolverReply reply;
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "unknown") reply.target = j.get<TargetSpec>();
  if (j.contains("members")) {
    for (const auto& m : j["members"]) reply.members.insert(normalize_label(m.get<std::string>()));
  }
  return reply;
}

Json resolver_reply_to_json(const ResolverReply& reply) {
  Json j = reply.target ? Json(*reply.target) : Json{{"kind", "unknown"}};
  if (!reply.members.empty()) j["members"] = reply.members;
  return j;
}

HttpResolver::HttpResolver(std::string base_url, std::string path, int timeout_ms)
    : base_url_(std::move(base_url)), path_(std::move(path)), timeout_ms_(timeout_ms) {}

ResolverReply HttpResolver::query(std::string_view phrase) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(phrase); it != cache_.end()) return it->second;
  }
  httplib::Client client(base_url_);
  client.set_connection_timeout(std::chrono::milliseconds(timeout_ms_));
  client.set_read_timeout(std::chrono::milliseconds(timeout_ms_));
  auto res = client.Post(path_, resolver_request_json(phrase).dump(), "application/json");
  if (!res) {
    throw std::runtime_error("resolver unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw std::runtime_error("resolver returned HTTP " + std::to_string(res->status));
  }
  auto reply = resolver_reply_from_json(Json::parse(res->body));
  std::lock_guard lock(mutex_);
  return cache_.emplace(std::string(phrase), std::move(reply)).first->second;
}

std::optional<TargetSpec> HttpResolver::resolve(std::string_view phrase) const {
  return query(phrase).target;
}

std::set<std::string> HttpResolver::expand(std::string_view category) const {
  return query(category).members;
}

}  // namespace uvgpt
