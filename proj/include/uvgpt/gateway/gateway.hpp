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
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uvgpt/core/json.hpp"
#include "uvgpt/engine/engine.hpp"
#include "uvgpt/parser/resolver.hpp"
#include "uvgpt/registry/registry.hpp"
#include "uvgpt/registry/selector.hpp"
#include "uvgpt/worker/backend.hpp"

namespace uvgpt {

struct GatewayConfig {
  SelectorWeights weights;
  VerifyThresholds thresholds;
  RetryPolicy retry;
  int max_parallel = 4;
  std::string output_dir;  // empty: next to each input (or the cwd for uploads)
  int port = 8080;
};

/// {"selector": {"lambda", "mu", "nu"}, "verify": {"conf_threshold",
///  "mask_iou"}, "retry": {"max_attempts"}, "max_parallel", "output_dir"}.
/// Missing keys keep their defaults.
GatewayConfig config_from_json(const Json& j, GatewayConfig base = {});

/// Reads UVGPT_CONFIG (file), then UVGPT_LAMBDA / UVGPT_MU / UVGPT_NU,
/// UVGPT_PORT and UVGPT_OUTPUT_DIR on top.
GatewayConfig config_from_env();

/// Three detectors and one segmenter over in-process mocks; used when no
/// registry is configured.
Registry builtin_registry();

/// Worker list: [{"name", "url", "timeout_ms"?}] for HTTP workers or
/// [{"name", "mock": true, "fixtures"?: dir, "fault"?: "empty_detections"}].
/// Every named worker must be in the registry. HTTP workers are checked
/// against their registry entry before use.
BackendMap backends_from_json(const Json& j, const Registry& registry, bool check_remote = true);

/// In-process mocks for every registry entry, faults per UVGPT_MOCK_FAULTY.
BackendMap mock_backends(const Registry& registry, const std::string& fixtures_dir = {});

enum class GatewayErrc {
  BadRequest,        // 400
  UnsupportedMedia,  // 400
  Infeasible,        // 422
  ExecutionFailed,   // 422
  TargetNotFound,    // 422
  NoWorkers,         // 503
};

std::string to_string(GatewayErrc code);
int http_status(GatewayErrc code);

class GatewayError : public std::runtime_error {
 public:
  GatewayError(GatewayErrc code, const std::string& what, std::optional<ExecutionTrace> trace = {})
      : std::runtime_error(what), code_(code), trace_(std::move(trace)) {}
  GatewayErrc code() const noexcept { return code_; }
  const std::optional<ExecutionTrace>& trace() const noexcept { return trace_; }

  /// {"error": {"code", "message"}, "trace": [...]?}
  Json body() const;

 private:
  GatewayErrc code_;
  std::optional<ExecutionTrace> trace_;
};

struct RequestImage {
  std::string path;      // read from disk when `bytes` is empty
  std::string filename;  // names an upload; defaults to the path
  std::string bytes;
};

struct RequestOptions {
  std::optional<bool> integrate;
  std::optional<double> conf_threshold;
  bool dump_plan = false;
  bool inline_images = false;  // base64 annotated images in the manifest
  bool write_files = true;
  std::string output_dir;
  // Called with the validated plan before anything executes.
  std::function<void(const TaskPlan&)> on_plan;
};

struct GeneralizedRequest {
  std::string prompt;
  std::vector<RequestImage> images;
  RequestOptions options;
};

struct SpecificRequest {
  std::string object_name;
  std::string image_location;
  RequestOptions options;
};

GeneralizedRequest generalized_from_json(const Json& j);
SpecificRequest specific_from_json(const Json& j);

struct PipelineResult {
  TaskPlan plan;
  Selection selection;
  ExecutionResult execution;
  Json manifest;
};

/// parse -> plan -> select -> execute -> write outputs. Stateless apart
/// from the shared registry and backends, so concurrent calls are safe.
class Pipeline {
 public:
  Pipeline(Registry registry, BackendMap backends, GatewayConfig config = {},
           std::shared_ptr<const SemanticResolver> resolver = nullptr);

  PipelineResult process(const GeneralizedRequest& request) const;
  /// Same pipeline as process("find all <object_name>", [image_location]).
  PipelineResult label(const SpecificRequest& request) const;

  const Registry& registry() const noexcept { return registry_; }
  const GatewayConfig& config() const noexcept { return config_; }

 private:
  Registry registry_;
  BackendMap backends_;
  GatewayConfig config_;
  std::shared_ptr<const SemanticResolver> resolver_;
};

}  // namespace uvgpt
