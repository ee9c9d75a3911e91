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

// Model selection. For a fixed plan the objective is
//
//   total = sum_t c(t, m_t) + lambda * |tasks|
//
// with the per-task cost
//
//   c(t, m) = +inf                 if m lacks the capability for t's verb
//             + 0                  if t's class is in m's vocabulary (or open)
//             + 1                  if outside a fixed vocabulary but m can
//                                  prompt-segment
//             + inf                otherwise
//             + mu * latency_cost(m) + nu * (1 - reliability(m)).
//
// Tasks are independent except for DistinctModels, which couples each
// Detect with its Segment tasks.

#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "uvgpt/core/types.hpp"
#include "uvgpt/parser/resolver.hpp"
#include "uvgpt/registry/registry.hpp"

namespace uvgpt {

inline constexpr const char* kCompositor = "compositor";
inline constexpr double kInfeasibleCost = std::numeric_limits<double>::infinity();

struct SelectorWeights {
  double lambda = 0.1;
  double mu = 0.01;
  double nu = 0.05;

  bool operator==(const SelectorWeights&) const = default;
};

struct Assignment {
  std::map<int, std::string> models;  // task id -> model name

  const std::string& at(int task_id) const { return models.at(task_id); }
  bool operator==(const Assignment&) const = default;
};

struct PlanScore {
  double mismatch = 0.0;
  double regularizer = 0.0;

  double total() const { return mismatch + regularizer; }
};

struct Selection {
  Assignment assignment;
  PlanScore score;
};

/// True for Detect/Segment tasks, which need a worker model.
bool needs_model(const VisionTask& task);

/// Whether m has the capability the task's verb needs.
bool capable(const VisionTask& task, const ModelDescriptor& m);

/// c(t, m). `resolver` expands Category targets; without one a category is
/// only covered by open vocabularies.
double task_cost(const VisionTask& task, const ModelDescriptor& m, const SelectorWeights& w,
                 const SemanticResolver* resolver = nullptr);

/// Models able to run the task, by ascending cost then name. Throws
/// NoCapableModel when there are none.
std::vector<ModelDescriptor> candidates(const VisionTask& task, const Registry& registry,
                                        const SelectorWeights& w = {},
                                        const SemanticResolver* resolver = nullptr);

/// Minimizes the plan objective. Throws Infeasible when a task has no
/// capable model or a DistinctModels chain cannot be split across two
/// models.
Selection select(const TaskPlan& plan, const Registry& registry, const SelectorWeights& w = {},
                 const SemanticResolver* resolver = nullptr);

/// Score of an arbitrary assignment (inf when it uses an incapable model).
PlanScore score_assignment(const TaskPlan& plan, const Assignment& assignment,
                           const Registry& registry, const SelectorWeights& w = {},
                           const SemanticResolver* resolver = nullptr);

Json assignment_to_json(const Assignment& a);

}  // namespace uvgpt
