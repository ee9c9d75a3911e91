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

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "uvgpt/core/mask.hpp"
#include "uvgpt/core/raster.hpp"

namespace uvgpt {

/// An input image known to the orchestrator. `id` is the file stem; `path`
/// may be empty for parse-only or in-memory use.
struct ImageRef {
  std::string id;
  std::string path;
  int width = 0;
  int height = 0;

  bool operator==(const ImageRef&) const = default;
};

struct Instruction {
  std::string text;
  std::vector<ImageRef> images;
};

/// Throws CoreError(InvalidInstruction) when the text is blank or an image
/// has a non-positive dimension.
void validate_instruction(const Instruction& instruction);

enum class Action { Detect, Segment };
enum class Quantifier { All, First };
enum class Constraint { DistinctModels };

struct TargetSpec {
  enum class Kind { Named, Category, Anomaly, MainObject };

  Kind kind = Kind::Named;
  // Class label for Named, category name for Category, empty otherwise.
  std::string name;

  static TargetSpec named(std::string cls) { return {Kind::Named, std::move(cls)}; }
  static TargetSpec category(std::string cat) { return {Kind::Category, std::move(cat)}; }
  static TargetSpec anomaly() { return {Kind::Anomaly, {}}; }
  static TargetSpec main_object() { return {Kind::MainObject, {}}; }

  auto operator<=>(const TargetSpec&) const = default;
};

std::string to_string(const TargetSpec& target);
std::string to_string(Action action);
std::string to_string(Quantifier quantifier);

struct Intent {
  Action action = Action::Detect;
  bool render = true;
  // Cleared by a trailing "only" after a highlight verb: masks are drawn
  // but detection boxes are not.
  bool show_boxes = true;
  TargetSpec target;
  Quantifier quantifier = Quantifier::First;
  bool conditional = false;
  std::set<Constraint> constraints;

  bool operator==(const Intent&) const = default;
};

struct IntentSet {
  std::vector<Intent> intents;
  std::string raw;

  bool operator==(const IntentSet&) const = default;
};

enum class Verb { Detect, Segment, Render, Integrate };

std::string to_string(Verb verb);

struct VisionTask {
  int id = 0;
  Verb verb = Verb::Detect;
  std::optional<TargetSpec> target;  // absent for Render and Integrate
  std::optional<int> image;          // index into the request images; absent for Integrate
  std::set<int> depends_on;
  Quantifier quantifier = Quantifier::First;
  bool conditional = false;
  std::set<Constraint> constraints;
  // Detect only: whether Render outlines this task's detections.
  bool draw_boxes = false;

  bool operator==(const VisionTask&) const = default;
};

struct TaskPlan {
  std::vector<VisionTask> tasks;
  IntentSet source;

  bool operator==(const TaskPlan&) const = default;
};

struct Detection {
  int instance_id = 0;
  std::string class_label;
  BBox bbox;
  double confidence = 0.0;

  bool operator==(const Detection&) const = default;
};

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;

  bool operator==(const Check&) const = default;
};

enum class Verdict { Pass, Fail, NotFoundOk };

std::string to_string(Verdict verdict);

struct VerificationReport {
  std::vector<Check> checks;
  Verdict verdict = Verdict::Pass;

  bool all_pass() const;
  bool operator==(const VerificationReport&) const = default;
};

struct TraceStep {
  int task_id = 0;
  std::string model_name;
  int attempt = 1;
  VerificationReport verification;
  double elapsed_ms = 0.0;
};

struct ExecutionTrace {
  std::vector<TraceStep> steps;

  std::vector<TraceStep> steps_for(int task_id) const;
};

/// Per-image outcome. `rendered` is set by the Render step; the gateway
/// writes it to disk and records the file in `rendered_path`.
struct ImageResult {
  ImageRef image;
  std::vector<Detection> detections;
  std::vector<InstanceMask> masks;
  std::vector<TargetSpec> not_found;
  std::optional<RasterImage> rendered;
  std::string rendered_path;
};

struct SceneResult {
  std::vector<ImageResult> images;
  std::optional<RasterImage> integrated;
};

/// Lowercase and naively singularize a class label ("Dogs" -> "dog").
/// Multi-word labels singularize their final word only.
std::string normalize_label(std::string_view label);

/// Clamp a box into a width x height frame. Returns nullopt when nothing
/// of the box remains.
std::optional<BBox> clamp_box(const BBox& box, int width, int height);

}  // namespace uvgpt
