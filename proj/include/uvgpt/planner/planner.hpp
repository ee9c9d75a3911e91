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

#include <span>
#include <stdexcept>
#include <string>

#include "uvgpt/core/types.hpp"

namespace uvgpt {

enum class PlanErrc {
  NoImages,
  InvalidIntentSet,
  CyclicPlan,
  OrphanSegment,
  DanglingDependency,
  NonDenseIds,
  ForwardDependency,
  BadDependency,
  MissingField,
};

std::string to_string(PlanErrc code);

class PlanError : public std::runtime_error {
 public:
  PlanError(PlanErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  PlanErrc code() const noexcept { return code_; }

 private:
  PlanErrc code_;
};

struct PlanOptions {
  // Emit the final Integrate task when more than one image is present.
  bool integrate = true;
};

/// Compiles intents into a per-image task DAG.
///
/// For every distinct target and image: one Detect (synthesized when only a
/// Segment was asked for) and, when masks are wanted, one Segment depending
/// on it. Each image gets one Render over its Detect/Segment tasks; with
/// several images a final Integrate depends on every Render. Task ids are
/// topological.
TaskPlan plan(const IntentSet& intents, std::span<const ImageRef> images,
              const PlanOptions& options = {});

/// Throws PlanError when the plan violates an invariant: dense ids,
/// resolvable and backward-pointing dependencies, acyclicity, and
/// dependency typing (Segment on exactly one same-image same-target Detect,
/// Render on Detect/Segment of its image, Integrate on Renders).
void validate_plan(const TaskPlan& plan);

}  // namespace uvgpt
