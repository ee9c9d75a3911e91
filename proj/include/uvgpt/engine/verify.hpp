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

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "uvgpt/core/types.hpp"
#include "uvgpt/parser/resolver.hpp"
#include "uvgpt/worker/protocol.hpp"

namespace uvgpt {

struct VerifyThresholds {
  double min_confidence = 0.25;  // theta
  double min_mask_iou = 0.5;     // tau

  bool operator==(const VerifyThresholds&) const = default;
};

enum class ResolveErrc { EmptyScene, NoAnomaly, TargetNotFound };

class ResolveError : public std::runtime_error {
 public:
  ResolveError(ResolveErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ResolveErrc code() const noexcept { return code_; }

 private:
  ResolveErrc code_;
};

/// Picks the instances a target refers to.
///   Named      -> detections of that class
///   Category   -> detections whose class is in resolver.expand(category)
///   Anomaly    -> instances of the least frequent class (ties: smallest
///                 class name); needs at least two classes in the scene
///   MainObject -> the single largest box (ties: higher confidence, then
///                 lower instance id)
/// Throws EmptyScene on no detections, NoAnomaly when every detection has
/// the same class, TargetNotFound when nothing matches.
std::vector<Detection> resolve_target(const TargetSpec& target,
                                      const std::vector<Detection>& detections,
                                      const SemanticResolver& resolver);

/// Keeps the highest-confidence instance for First (ties: lower id).
std::vector<Detection> apply_quantifier(std::vector<Detection> instances, Quantifier q);

struct VerifyContext {
  int image_width = 0;
  int image_height = 0;
  VerifyThresholds thresholds;
  const SemanticResolver* resolver = nullptr;  // defaults to the table resolver
};

struct DetectOutput {
  std::vector<Detection> detections;  // as returned by the worker
};

struct SegmentOutput {
  std::vector<BBox> boxes;  // conditioning box per expected mask
  std::vector<MaskPayload> masks;  // mask k belongs to boxes[k]
};

using TaskOutputView = std::variant<DetectOutput, SegmentOutput>;

/// Detect checks: coverage, confidence, bounds. Segment checks: mask count,
/// non-empty valid mask, mask/box IoU >= tau. Failures are reported, never
/// thrown. A conditional task whose only failure is coverage is NotFoundOk.
VerificationReport verify(const VisionTask& task, const TaskOutputView& output,
                          const VerifyContext& context);

struct DetectVerification {
  VerificationReport report;
  std::vector<Detection> selected;  // clamped, resolved, quantified; empty unless Pass
};

DetectVerification verify_detect(const VisionTask& task, const std::vector<Detection>& raw,
                                 const VerifyContext& context);

/// Categories expanded for a worker class filter; empty for open passes.
std::vector<std::string> class_filter(const TargetSpec& target, const SemanticResolver& resolver);

}  // namespace uvgpt
