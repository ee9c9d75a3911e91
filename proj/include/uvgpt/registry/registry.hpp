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
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "uvgpt/core/json.hpp"

namespace uvgpt {

enum class RegistryErrc { DuplicateName, InvalidDescriptor, UnknownModel, NoCapableModel, Infeasible };

class RegistryError : public std::runtime_error {
 public:
  RegistryError(RegistryErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  RegistryErrc code() const noexcept { return code_; }

 private:
  RegistryErrc code_;
};

enum class Capability { Detect, Segment, PromptSegment };

std::string to_string(Capability c);

struct Vocabulary {
  bool open = true;
  std::set<std::string> classes;  // used when !open

  static Vocabulary open_set() { return {}; }
  static Vocabulary fixed(std::set<std::string> classes) { return {false, std::move(classes)}; }

  bool operator==(const Vocabulary&) const = default;
};

struct ModelDescriptor {
  std::string name;
  std::set<Capability> capabilities;
  Vocabulary vocabulary;
  double latency_cost = 0.0;  // abstract units, >= 0
  double reliability = 1.0;   // (0, 1]

  bool can(Capability c) const { return capabilities.contains(c); }
  bool operator==(const ModelDescriptor&) const = default;
};

/// Empty when valid, else the reason.
std::string descriptor_problem(const ModelDescriptor& d);

void to_json(Json& j, const ModelDescriptor& d);
void from_json(const Json& j, ModelDescriptor& d);

/// Read-mostly, thread-safe set of model descriptors keyed by name.
class Registry {
 public:
  Registry() = default;
  Registry(const Registry& other);
  Registry& operator=(const Registry& other);

  /// Throws DuplicateName or InvalidDescriptor.
  void register_model(ModelDescriptor descriptor);

  std::optional<ModelDescriptor> find(const std::string& name) const;
  bool contains(const std::string& name) const;
  bool empty() const;
  std::size_t size() const;

  /// All descriptors in name order.
  std::vector<ModelDescriptor> snapshot() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, ModelDescriptor> models_;
};

Registry registry_from_json(const Json& j);
Registry load_registry_file(const std::string& path);

}  // namespace uvgpt
