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
#include <string>

#include "uvgpt/registry/registry.hpp"
#include "uvgpt/worker/protocol.hpp"

namespace uvgpt {

/// A model worker. Implementations must accept concurrent calls.
class WorkerBackend {
 public:
  virtual ~WorkerBackend() = default;

  virtual std::string name() const = 0;
  virtual ModelDescriptor capabilities() = 0;
  virtual DetectResponse detect(const DetectRequest& request) = 0;
  virtual SegmentResponse segment(const SegmentRequest& request) = 0;
};

using BackendMap = std::map<std::string, std::shared_ptr<WorkerBackend>>;

/// Queries the worker's descriptor and checks it against the registry
/// entry of the same name. Throws DescriptorMismatch when they disagree or
/// the reported descriptor is invalid.
ModelDescriptor check_capabilities(WorkerBackend& backend, const Registry& registry);

}  // namespace uvgpt
