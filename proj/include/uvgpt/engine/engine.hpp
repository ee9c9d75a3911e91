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

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "uvgpt/core/types.hpp"
#include "uvgpt/engine/verify.hpp"
#include "uvgpt/registry/registry.hpp"
#include "uvgpt/registry/selector.hpp"
#include "uvgpt/worker/backend.hpp"

namespace uvgpt {

enum class ExecErrc {
  InvalidInput,        // plan, assignment or images are inconsistent
  AllAttemptsFailed,   // verification kept failing
  BackendUnreachable,  // every attempt died in transport
  TargetNotFound,      // a required target never showed up
};

std::string to_string(ExecErrc code);

class ExecutionError : public std::runtime_error {
 public:
  ExecutionError(ExecErrc code, const std::string& what, int task_id = -1,
                 ExecutionTrace trace = {}, std::optional<TargetSpec> target = std::nullopt)
      : std::runtime_error(what),
        code_(code),
        task_id_(task_id),
        trace_(std::move(trace)),
        target_(std::move(target)) {}

  ExecErrc code() const noexcept { return code_; }
  int task_id() const noexcept { return task_id_; }
  const ExecutionTrace& trace() const noexcept { return trace_; }
  const std::optional<TargetSpec>& target() const noexcept { return target_; }

 private:
  ExecErrc code_;
  int task_id_;
  ExecutionTrace trace_;
  std::optional<TargetSpec> target_;
};

struct RetryPolicy {
  // Assigned model first, then the remaining candidates by ascending cost.
  int max_attempts = 2;
};

using ImageLoader = std::function<RasterImage(const ImageRef&)>;

/// Reads `.ppm` files; anything else (or an empty path) becomes a black
/// canvas of the declared size.
RasterImage default_image_loader(const ImageRef& image);

struct ExecutionOptions {
  VerifyThresholds thresholds;
  SelectorWeights weights;
  RetryPolicy retry;
  std::shared_ptr<const SemanticResolver> resolver;  // null: default table
  ImageLoader loader;                                // null: default_image_loader
  int max_parallel = 4;                              // 1 runs inline
};

struct ExecutionResult {
  SceneResult scene;
  ExecutionTrace trace;  // sorted by (task id, attempt)
};

/// Runs the plan in dependency order, independent tasks in parallel.
/// Instance ids in the result are renumbered per image from 0 in task-id
/// order, so the outcome does not depend on scheduling. Render and
/// Integrate run locally and leave no trace steps.
ExecutionResult execute(const TaskPlan& plan, std::span<const ImageRef> images,
                        const Assignment& assignment, const Registry& registry,
                        const BackendMap& backends, const ExecutionOptions& options = {});

}  // namespace uvgpt
