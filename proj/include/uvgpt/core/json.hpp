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

// JSON encodings of the core value types. Object keys are emitted in sorted
// order (nlohmann::json default), which makes dump() canonical.

#pragma once

#include <json.hpp>
#include "uvgpt/core/types.hpp"

namespace uvgpt {

using Json = nlohmann::json;

void to_json(Json& j, const TargetSpec& t);
void from_json(const Json& j, TargetSpec& t);

void to_json(Json& j, const BBox& b);
void from_json(const Json& j, BBox& b);

void to_json(Json& j, const Detection& d);
void from_json(const Json& j, Detection& d);

void to_json(Json& j, const InstanceMask& m);
InstanceMask mask_from_json(const Json& j);

void to_json(Json& j, const VisionTask& t);
void from_json(const Json& j, VisionTask& t);

Json plan_to_json(const TaskPlan& plan);
TaskPlan plan_from_json(const Json& j);

void to_json(Json& j, const Check& c);
void to_json(Json& j, const VerificationReport& r);

/// One trace step. Timing is nondeterministic, so callers that need
/// reproducible output pass `with_timing = false`.
Json step_to_json(const TraceStep& step, bool with_timing = true);
Json trace_to_json(const ExecutionTrace& trace, bool with_timing = true);
/// JSON Lines, one step per line.
std::string trace_to_jsonl(const ExecutionTrace& trace);

/// {"detections", "masks", "not_found"} for one image.
Json image_result_to_json(const ImageResult& r);
/// Canonical SceneResult: a list of per-image result objects.
Json scene_to_json(const SceneResult& scene);

}  // namespace uvgpt
