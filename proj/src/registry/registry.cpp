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

#include "uvgpt/registry/registry.hpp"

#include <fstream>
#include <mutex>

namespace uvgpt {

std::string to_string(Capability c) {
  switch (c) {
    case Capability::Detect: return "detect";
    case Capability::Segment: return "segment";
    case Capability::PromptSegment: return "prompt_segment";
  }
  return {};
}

std::string descriptor_problem(const ModelDescriptor& d) {
  if (d.name.empty()) return "model name is empty";
  if (d.name == "compositor") return "model name 'compositor' is reserved";
  if (d.capabilities.empty()) return "model '" + d.name + "' declares no capabilities";
  if (!d.vocabulary.open && d.vocabulary.classes.empty()) {
    return "model '" + d.name + "' has an empty fixed vocabulary";
  }
  if (!(d.latency_cost >= 0.0)) return "model '" + d.name + "' has negative latency_cost";
  if (!(d.reliability > 0.0 && d.reliability <= 1.0)) {
    return "model '" + d.name + "' reliability must be in (0, 1]";
  }
  return {};
}

void to_json(Json& j, const ModelDescriptor& d) {
  Json caps = Json::array();
  for (auto c : d.capabilities) caps.push_back(to_string(c));
  j = {{"name", d.name},
       {"capabilities", caps},
       {"vocabulary", {{"open", d.vocabulary.open}, {"classes", d.vocabulary.classes}}},
       {"latency_cost", d.latency_cost},
       {"reliability", d.reliability}};
}

void from_json(const Json& j, ModelDescriptor& d) {
  d = ModelDescriptor{};
  d.name = j.at("name").get<std::string>();
  for (const auto& c : j.at("capabilities")) {
    const auto s = c.get<std::string>();
    if (s == "detect") {
      d.capabilities.insert(Capability::Detect);
    } else if (s == "segment") {
      d.capabilities.insert(Capability::Segment);
    } else if (s == "prompt_segment") {
      d.capabilities.insert(Capability::PromptSegment);
    } else {
      throw RegistryError(RegistryErrc::InvalidDescriptor, "unknown capability '" + s + "'");
    }
  }
  const auto& vocab = j.at("vocabulary");
  d.vocabulary.open = vocab.at("open").get<bool>();
  for (const auto& c : vocab.value("classes", Json::array())) {
    d.vocabulary.classes.insert(normalize_label(c.get<std::string>()));
  }
  d.latency_cost = j.value("latency_cost", 0.0);
  d.reliability = j.value("reliability", 1.0);
}

Registry::Registry(const Registry& other) {
  std::shared_lock lock(other.mutex_);
  models_ = other.models_;
}

Registry& Registry::operator=(const Registry& other) {
  if (this == &other) return *this;
  std::map<std::string, ModelDescriptor> copy;
  {
    std::shared_lock lock(other.mutex_);
    copy = other.models_;
  }
  std::unique_lock lock(mutex_);
  models_ = std::move(copy);
  return *this;
}

void Registry::register_model(ModelDescriptor descriptor) {
  if (auto problem = descriptor_problem(descriptor); !problem.empty()) {
    throw RegistryError(RegistryErrc::InvalidDescriptor, problem);
  }
  std::unique_lock lock(mutex_);
  if (models_.contains(descriptor.name)) {
    throw RegistryError(RegistryErrc::DuplicateName,
                        "model '" + descriptor.name + "' already registered");
  }
  auto name = descriptor.name;
  models_.emplace(std::move(name), std::move(descriptor));
}

std::optional<ModelDescriptor> Registry::find(const std::string& name) const {
  std::shared_lock lock(mutex_);
  auto it = models_.find(name);
  if (it == models_.end()) return std::nullopt;
  return it->second;
}

bool Registry::contains(const std::string& name) const {
  std::shared_lock lock(mutex_);
  return models_.contains(name);
}

bool Registry::empty() const {
  std::shared_lock lock(mutex_);
  return models_.empty();
}

std::size_t Registry::size() const {
  std::shared_lock lock(mutex_);
  return models_.size();
}

std::vector<ModelDescriptor> Registry::snapshot() const {
  std::shared_lock lock(mutex_);
  std::vector<ModelDescriptor> out;
  out.reserve(models_.size());
  for (const auto& [_, d] : models_) out.push_back(d);
  return out;
}

Registry registry_from_json(const Json& j) {
  if (!j.is_array()) {
    throw RegistryError(RegistryErrc::InvalidDescriptor, "registry must be a JSON list");
  }
  Registry r;
  for (const auto& entry : j) r.register_model(entry.get<ModelDescriptor>());
  return r;
}

Registry load_registry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RegistryError(RegistryErrc::InvalidDescriptor, "cannot open registry " + path);
  return registry_from_json(Json::parse(in));
}

}  // namespace uvgpt
