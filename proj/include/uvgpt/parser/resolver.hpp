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

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "uvgpt/core/json.hpp"
#include "uvgpt/core/types.hpp"

namespace uvgpt {

/// Maps free-form target phrases onto target specs. Implementations must be
/// deterministic for a fixed configuration and safe for concurrent calls.
class SemanticResolver {
 public:
  virtual ~SemanticResolver() = default;

  /// nullopt means Unknown; the parser then passes the phrase through as a
  /// Named target.
  virtual std::optional<TargetSpec> resolve(std::string_view phrase) const = 0;

  /// Class names belonging to a category; empty for unknown categories.
  virtual std::set<std::string> expand(std::string_view category) const = 0;
};

using Ontology = std::map<std::string, std::set<std::string>, std::less<>>;

/// Table-driven resolver: phrases naming an ontology category resolve to
/// that category, everything else is an open-vocabulary Named class.
class TableResolver final : public SemanticResolver {
 public:
  explicit TableResolver(Ontology ontology);

  std::optional<TargetSpec> resolve(std::string_view phrase) const override;
  std::set<std::string> expand(std::string_view category) const override;

  const Ontology& ontology() const noexcept { return ontology_; }

 private:
  Ontology ontology_;
};

const Ontology& default_ontology();
std::shared_ptr<const SemanticResolver> default_resolver();

// Wire contract for an external (e.g. LLM-backed) resolver:
//   request  {"phrase": string}
//   response {"kind": "named"|"category"|"anomaly"|"main_object",
//             "class": string?, "members": [string]?}
struct ResolverReply {
  std::optional<TargetSpec> target;  // nullopt for an "unknown" reply
  std::set<std::string> members;
};

Json resolver_request_json(std::string_view phrase);
ResolverReply resolver_reply_from_json(const Json& j);
Json resolver_reply_to_json(const ResolverReply& reply);

/// Resolver that forwards phrases over HTTP to a plug-in service. Replies
/// are cached so repeated phrases (and category expansion after a
/// resolve) stay deterministic within one process.
class HttpResolver final : public SemanticResolver {
 public:
  /// `base_url` like "http://127.0.0.1:8090"; requests go to POST `path`.
  HttpResolver(std::string base_url, std::string path = "/v1/resolve", int timeout_ms = 5000);

  std::optional<TargetSpec> resolve(std::string_view phrase) const override;
  std::set<std::string> expand(std::string_view category) const override;

 private:
  ResolverReply query(std::string_view phrase) const;

  std::string base_url_;
  std::string path_;
  int timeout_ms_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, ResolverReply, std::less<>> cache_;
};

}  // namespace uvgpt
